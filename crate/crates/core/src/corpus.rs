//! Worked example laws: the urn without replacement, a four-point law that
//! fails infinite extendibility despite a nonnegative covariance, and dyadic
//! discretizations of densities of the form `g(max(x_1, x_2))`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::cap::resource_cap;
use crate::error::{Error, Result};
use crate::extend::{
    check_extendible, covariance_bound, probe_infinite, probe_infinite_with, CovarianceReport, InfiniteOutcome,
    InfiniteReport, Verdict,
};
use crate::measures::ExchangeableLaw;
use crate::represent::{represents, Atom, SignedMixture};
use crate::typespace::{type_count, Alphabet, TypeVector};
use crate::Rational;

/// Uniform law on the sequences in `{0,1}^n` with exactly `ones` ones.
pub fn urn_without_replacement(n: u32, ones: u32) -> Result<ExchangeableLaw> {
    if n < 2 {
        return Err(Error::input("urn needs n >= 2"));
    }
    if ones > n {
        return Err(Error::input(format!("{ones} ones do not fit in {n} draws")));
    }
    let alphabet = Alphabet::new(["0", "1"])?;
    ExchangeableLaw::uniform_on_class(alphabet, TypeVector::new(vec![n - ones, ones]))
}

/// Law on pairs over `{s1,s2,s3,s4}` with mass 1/2 on `{s1,s2}` and 1/2 on
/// `{s3,s4}`, with the numeric embedding `(1, 3/2, 2, 5/2)`.
pub fn appendix_a1_law() -> (ExchangeableLaw, Vec<Rational>) {
    let alphabet = Alphabet::new(["s1", "s2", "s3", "s4"]).expect("distinct symbols");
    let half = Rational::new(1.into(), 2.into());
    let law = ExchangeableLaw::new(
        alphabet,
        2,
        [
            (TypeVector::new(vec![1, 1, 0, 0]), half.clone()),
            (TypeVector::new(vec![0, 0, 1, 1]), half),
        ],
    )
    .expect("valid law");
    let embedding = [(1, 1), (3, 2), (2, 1), (5, 2)]
        .into_iter()
        .map(|(p, q)| Rational::new(p.into(), q.into()))
        .collect();
    (law, embedding)
}

/// Number of bounded dyadic cells `[(r-1)/2^j, r/2^j)` below `j`.
pub fn cell_count(j: u32) -> Result<usize> {
    if j == 0 {
        return Err(Error::input("level j must be at least 1"));
    }
    let cells = 1u128
        .checked_shl(j)
        .and_then(|p| p.checked_mul(u128::from(j)))
        .filter(|&c| c <= resource_cap())
        .ok_or(Error::Capacity {
            what: "dyadic cells",
            size: u128::MAX,
            cap: resource_cap(),
        })?;
    Ok(cells as usize)
}

/// `r / 2^j`
pub fn grid_point(j: u32, r: usize) -> Rational {
    Rational::new(r.into(), num_bigint::BigInt::one() << j as usize)
}

/// Closed-form nonincreasing profiles for tests and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GShape {
    /// `g(t) = 1`
    Constant,
    /// `g(t) = max(0, 1 - t)`
    ClippedLinear,
    /// `g(t) = 1 / (1 + t)`
    Reciprocal,
}

impl GShape {
    pub const ALL: [GShape; 3] = [GShape::Constant, GShape::ClippedLinear, GShape::Reciprocal];

    pub fn eval(self, t: &Rational) -> Rational {
        match self {
            GShape::Constant => Rational::one(),
            GShape::ClippedLinear => (Rational::one() - t).max(Rational::zero()),
            GShape::Reciprocal => (Rational::one() + t).recip(),
        }
    }
}

impl fmt::Display for GShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GShape::Constant => "constant",
            GShape::ClippedLinear => "linear",
            GShape::Reciprocal => "reciprocal",
        })
    }
}

impl FromStr for GShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(GShape::Constant),
            "linear" => Ok(GShape::ClippedLinear),
            "reciprocal" => Ok(GShape::Reciprocal),
            other => Err(Error::input(format!(
                "unknown profile {other:?}; expected constant, linear or reciprocal"
            ))),
        }
    }
}

/// Values of `g` at dyadic grid points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GProfile {
    values: BTreeMap<Rational, Rational>,
}

impl GProfile {
    pub fn new(values: BTreeMap<Rational, Rational>) -> Self {
        GProfile { values }
    }

    /// Samples `f` at `r / 2^j` for `r = 1 ..= j 2^j`; this covers every
    /// coarser level as well.
    pub fn from_fn(j: u32, f: impl Fn(&Rational) -> Rational) -> Result<Self> {
        let values = (1..=cell_count(j)?)
            .map(|r| {
                let t = grid_point(j, r);
                let v = f(&t);
                (t, v)
            })
            .collect();
        Ok(GProfile { values })
    }

    pub fn from_shape(j: u32, shape: GShape) -> Result<Self> {
        Self::from_fn(j, |t| shape.eval(t))
    }

    pub fn values(&self) -> &BTreeMap<Rational, Rational> {
        &self.values
    }

    /// `g(a_1), ..., g(a_{j 2^j})` at level `j`.
    pub fn at_level(&self, j: u32) -> Result<Vec<Rational>> {
        let values: Vec<Rational> = (1..=cell_count(j)?)
            .map(|r| {
                let t = grid_point(j, r);
                self.values
                    .get(&t)
                    .cloned()
                    .ok_or_else(|| Error::input(format!("g is not given at {t}")))
            })
            .collect::<Result<_>>()?;
        if values.iter().any(Signed::is_negative) {
            return Err(Error::input("g takes a negative value"));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::input("g is not nonincreasing on the grid"));
        }
        if values.iter().all(Zero::is_zero) {
            return Err(Error::input("g vanishes on the grid"));
        }
        Ok(values)
    }
}

/// Ordered-pair cell probabilities `c_j g(a_{max(k,l)})` and the normalizer.
fn gnedin_cells(g: &[Rational]) -> Rational {
    // number of ordered pairs with max(k,l) = r is 2r - 1
    let total: Rational = g
        .iter()
        .enumerate()
        .map(|(i, v)| v * Rational::from_integer((2 * i + 1).into()))
        .sum();
    total.recip()
}

/// Level-`j` discretization `P_j` on `n = 2` over the bounded cells, with
/// its decomposition `c_j sum_r [g(a_r) - g(a_{r+1})] r^2 Q_r` into uniform
/// product laws `Q_r` on the first `r` cells. The unbounded cell carries no
/// mass and is left out of the alphabet.
pub fn gnedin_discretization(j: u32, profile: &GProfile) -> Result<(ExchangeableLaw, SignedMixture)> {
    let g = profile.at_level(j)?;
    let k = g.len();
    let size = type_count(k, 2);
    if size > resource_cap() {
        return Err(Error::Capacity {
            what: "type space",
            size,
            cap: resource_cap(),
        });
    }
    let alphabet = Alphabet::new((1..=k).map(|r| format!("I{r}")))?;
    let c = gnedin_cells(&g);
    let two = Rational::from_integer(2.into());
    let mut weights = Vec::with_capacity(k * (k + 1) / 2);
    for a in 0..k {
        for b in a..k {
            let mut counts = vec![0u32; k];
            counts[a] += 1;
            counts[b] += 1;
            let cell = &c * &g[b];
            let w = if a == b { cell } else { cell * &two };
            weights.push((TypeVector::new(counts), w));
        }
    }
    let law = ExchangeableLaw::new(alphabet, 2, weights)?;

    let mut atoms = Vec::new();
    for r in 1..=k {
        let next = g.get(r).cloned().unwrap_or_else(Rational::zero);
        let weight = &c * (&g[r - 1] - next) * Rational::from_integer((r * r).into());
        if weight.is_zero() {
            continue;
        }
        atoms.push(Atom {
            weight,
            theta: uniform_prefix(k, r),
        });
    }
    let mixture = SignedMixture::new(atoms)?;
    if !mixture.is_probability() || !represents(&mixture, &law) {
        return Err(Error::Internal("dyadic decomposition does not reconstruct".into()));
    }
    Ok((law, mixture))
}

/// Uniform probability vector on the first `r` of `k` symbols.
pub fn uniform_prefix(k: usize, r: usize) -> Vec<Rational> {
    let share = Rational::new(1.into(), r.into());
    (0..k)
        .map(|i| if i < r { share.clone() } else { Rational::zero() })
        .collect()
}

/// The product laws `Q_1, ..., Q_k` used by the dyadic decomposition.
pub fn uniform_prefixes(k: usize) -> Vec<Vec<Rational>> {
    (1..=k).map(|r| uniform_prefix(k, r)).collect()
}

/// Level-`i` cell of the level-`j` cell `k` (1-based); 0 is the unbounded
/// cell `[i, inf)`.
fn coarse_cell(k: usize, j: u32, i: u32) -> usize {
    let bounded = (i as usize) << i;
    let cell = ((k - 1) >> (j - i)) + 1;
    if cell > bounded {
        0
    } else {
        cell
    }
}

/// Probabilities of the level-`i` rectangles `I_a(i) x I_b(i)` under `P_j`.
fn rectangle_masses(j: u32, i: u32, profile: &GProfile) -> Result<BTreeMap<(usize, usize), Rational>> {
    let g = profile.at_level(j)?;
    let c = gnedin_cells(&g);
    let mut masses = BTreeMap::new();
    for k in 1..=g.len() {
        for l in 1..=g.len() {
            let p = &c * &g[k.max(l) - 1];
            *masses
                .entry((coarse_cell(k, j, i), coarse_cell(l, j, i)))
                .or_insert_with(Rational::zero) += p;
        }
    }
    Ok(masses)
}

/// For each `j` in `j_list`, `sup_A |P_j(A) - P_J(A)|` over level-`i` cell
/// rectangles `A`, where `J = max(j_list)`. The sequence is reported, not
/// required to decrease.
pub fn coarse_convergence_check(j_list: &[u32], i: u32, profile: &GProfile) -> Result<Vec<Rational>> {
    let finest = *j_list
        .iter()
        .max()
        .ok_or_else(|| Error::input("no levels given"))?;
    let coarsest = *j_list.iter().min().expect("nonempty");
    if i == 0 || i > coarsest {
        return Err(Error::input(format!(
            "comparison level {i} must lie in 1..={coarsest}"
        )));
    }
    let reference = rectangle_masses(finest, i, profile)?;
    j_list
        .iter()
        .map(|&j| {
            let masses = rectangle_masses(j, i, profile)?;
            let mut worst = Rational::zero();
            for key in reference.keys().chain(masses.keys()) {
                let a = masses.get(key).cloned().unwrap_or_else(Rational::zero);
                let b = reference.get(key).cloned().unwrap_or_else(Rational::zero);
                worst = worst.max((a - b).abs());
            }
            Ok(worst)
        })
        .collect()
}

/// One checked statement about a corpus law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub statement: String,
    pub holds: bool,
    pub detail: String,
}

impl Claim {
    fn new(statement: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Claim {
            statement: statement.into(),
            holds,
            detail: detail.into(),
        }
    }
}

/// The urn law is `N`-extendible for no `N` in `n+1 ..= max_n` unless it is
/// a point mass, which is a product law and extends to every length.
pub fn urn_claims(n: u32, ones: u32, max_n: u32) -> Result<Vec<Claim>> {
    let law = urn_without_replacement(n, ones)?;
    if max_n <= n {
        return Err(Error::input(format!("max N = {max_n} must exceed n = {n}")));
    }
    let degenerate = ones == 0 || ones == n;
    let mut claims = Vec::new();
    for big_n in n + 1..=max_n {
        let report = check_extendible(&law, big_n)?;
        let expected = if degenerate { Verdict::Extendible } else { Verdict::NotExtendible };
        claims.push(Claim::new(
            format!("{} at N = {big_n}", if degenerate { "extendible" } else { "not extendible" }),
            report.verdict == expected,
            format!("norm {}", report.norm),
        ));
    }
    if degenerate {
        let probe = probe_infinite(&law, n + 1, 1)?;
        claims.push(Claim::new(
            "point mass is infinitely extendible",
            matches!(probe.outcome, InfiniteOutcome::CertifiedInfinite { .. }),
            match &probe.outcome {
                InfiniteOutcome::CertifiedInfinite { mixture } => format!("{} product components", mixture.len()),
                InfiniteOutcome::RefutedAt { big_n, .. } => format!("refuted at N = {big_n}"),
                InfiniteOutcome::Unknown => "undecided".to_string(),
            },
        ));
    }
    Ok(claims)
}

pub fn appendix_a1_claims(max_n: u32, grid_depth: u32) -> Result<Vec<Claim>> {
    let (law, embedding) = appendix_a1_law();
    let cov = covariance_bound(&law, &embedding)?;
    let probe = probe_infinite(&law, max_n, grid_depth)?;
    Ok(appendix_a1_claims_from(&cov, &probe, max_n))
}

/// Claims about the four-point pair law from an already computed
/// covariance report and probe.
pub fn appendix_a1_claims_from(cov: &CovarianceReport, probe: &InfiniteReport, max_n: u32) -> Vec<Claim> {
    let expected = Rational::new(3.into(), 16.into());
    let refuted_at = match &probe.outcome {
        InfiniteOutcome::RefutedAt { big_n, .. } => Some(*big_n),
        _ => None,
    };
    vec![
        Claim::new(
            "cov(X1, X2) = 3/16",
            cov.cov == expected,
            format!("cov {}, var {}", cov.cov, cov.var),
        ),
        Claim::new(
            "covariance bound holds",
            cov.satisfies,
            "cov >= -var/(n-1) with n = 2",
        ),
        Claim::new(
            "not infinitely extendible",
            refuted_at.is_some(),
            match refuted_at {
                Some(big_n) => format!("refuted at N = {big_n}"),
                None => format!("no refutation up to N = {max_n}"),
            },
        ),
    ]
}

pub fn gnedin_claims(j: u32, profile: &GProfile, max_n: u32) -> Result<Vec<Claim>> {
    let (law, mixture) = gnedin_discretization(j, profile)?;
    let probe = probe_infinite_with(&law, max_n, 1, &uniform_prefixes(law.k()))?;
    Ok(gnedin_claims_from(&law, &mixture, &probe))
}

/// Claims about a discretized law from its decomposition and a probe.
pub fn gnedin_claims_from(law: &ExchangeableLaw, mixture: &SignedMixture, probe: &InfiniteReport) -> Vec<Claim> {
    let nonnegative = mixture.atoms().iter().all(|a| !a.weight.is_negative());
    vec![
        Claim::new(
            "mixture of product laws",
            nonnegative && represents(mixture, law),
            format!("{} uniform components", mixture.atoms().len()),
        ),
        Claim::new(
            "infinitely extendible",
            matches!(probe.outcome, InfiniteOutcome::CertifiedInfinite { .. }),
            format!("extendible for N in {}..={}", probe.probe_range.0, probe.probe_range.1),
        ),
    ]
}
