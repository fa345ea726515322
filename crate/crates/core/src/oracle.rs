//! Brute-force oracles, independent of the fast paths they check.
//!
//! Nothing here uses urn coefficients, type-space sums or the simplex
//! solver: urn laws come from enumerating ordered draws, symmetrization
//! from averaging over index injections, marginals from summing over
//! sequences, and linear programs from enumerating vertices and extreme
//! rays. The costs are exponential; these are for small instances.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::extend::{ExtendReport, Verdict};
use crate::lp::{LinearProgram, LowerBound, LpStatus, Relation};
use crate::measures::ExchangeableLaw;
use crate::symmetrize::SymmetricFunction;
use crate::typespace::TypeVector;
use crate::Rational;

/// Calls `visit` on every injection `{0..n} -> {0..big_n}` as an index list.
pub fn for_each_injection(n: usize, big_n: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(n: usize, used: &mut [bool], cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            visit(cur);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, used, cur, visit);
                cur.pop();
                used[i] = false;
            }
        }
    }
    if n > big_n {
        return;
    }
    let mut used = vec![false; big_n];
    rec(n, &mut used, &mut Vec::with_capacity(n), &mut visit);
}

/// Calls `visit` on every sequence in `{0..k}^len`.
pub fn for_each_sequence(k: usize, len: usize, mut visit: impl FnMut(&[usize])) {
    let mut seq = vec![0usize; len];
    loop {
        visit(&seq);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < k {
                break;
            }
            seq[pos] = 0;
        }
    }
}

fn count_type(k: usize, seq: impl Iterator<Item = usize>) -> TypeVector {
    let mut counts = vec![0u32; k];
    for s in seq {
        counts[s] += 1;
    }
    TypeVector::new(counts)
}

/// A sequence of type `t`: symbols in alphabet order.
pub fn representative(t: &TypeVector) -> Vec<usize> {
    t.counts()
        .iter()
        .enumerate()
        .flat_map(|(a, &c)| std::iter::repeat_n(a, c as usize))
        .collect()
}

/// Type distribution of `n` ordered draws without replacement from the urn
/// `nu`, by enumerating all `(N)_n` draws.
pub fn draw_type_distribution(nu: &TypeVector, n: u32) -> BTreeMap<TypeVector, Rational> {
    let balls = representative(nu);
    let mut hits: BTreeMap<TypeVector, u64> = BTreeMap::new();
    let mut total = 0u64;
    for_each_injection(n as usize, balls.len(), |sel| {
        let t = count_type(nu.k(), sel.iter().map(|&i| balls[i]));
        *hits.entry(t).or_default() += 1;
        total += 1;
    });
    hits.into_iter()
        .map(|(t, h)| (t, Rational::new(BigInt::from(h), BigInt::from(total))))
        .collect()
}

/// `(U^N_n g)(x)` by averaging `g` over all ordered selections of `n`
/// coordinates of `x`.
pub fn symmetrize_at(g: &SymmetricFunction, x: &[usize]) -> Rational {
    let k = g.alphabet().len();
    let mut sum = Rational::zero();
    let mut count = 0u64;
    for_each_injection(g.m() as usize, x.len(), |sel| {
        sum += g.value(&count_type(k, sel.iter().map(|&i| x[i])));
        count += 1;
    });
    sum / Rational::from_integer(BigInt::from(count))
}

/// `sup_x |U^N_n g(x)|` over every sequence in `S^N`.
pub fn symmetrized_sup_norm(g: &SymmetricFunction, big_n: u32) -> Rational {
    let k = g.alphabet().len();
    let mut best = Rational::zero();
    for_each_sequence(k, big_n as usize, |x| {
        let v = symmetrize_at(g, x).abs();
        if v > best {
            best = v;
        }
    });
    best
}

/// `E g` by summing over every sequence in `S^n`.
pub fn expectation_by_points(law: &ExchangeableLaw, g: &SymmetricFunction) -> Rational {
    let k = law.k();
    let mut sum = Rational::zero();
    for_each_sequence(k, law.n() as usize, |x| {
        let t = count_type(k, x.iter().copied());
        let p = law.point_probability(&t);
        if !p.is_zero() {
            sum += p * g.value(&t);
        }
    });
    sum
}

/// Type weights of the first `m` coordinates, by summing sequence
/// probabilities over all of `S^n`.
pub fn marginal_by_points(law: &ExchangeableLaw, m: u32) -> BTreeMap<TypeVector, Rational> {
    let k = law.k();
    let mut out: BTreeMap<TypeVector, Rational> = BTreeMap::new();
    for_each_sequence(k, law.n() as usize, |x| {
        let p = law.point_probability(&count_type(k, x.iter().copied()));
        if !p.is_zero() {
            let head = count_type(k, x[..m as usize].iter().copied());
            *out.entry(head).or_insert_with(Rational::zero) += p;
        }
    });
    out.retain(|_, v| !v.is_zero());
    out
}

/// Multinomial type weights by summing `prod theta` over every sequence.
pub fn product_by_points(theta: &[Rational], n: u32) -> BTreeMap<TypeVector, Rational> {
    let k = theta.len();
    let mut out: BTreeMap<TypeVector, Rational> = BTreeMap::new();
    for_each_sequence(k, n as usize, |x| {
        let p = x.iter().fold(Rational::one(), |acc, &s| acc * &theta[s]);
        if !p.is_zero() {
            *out.entry(count_type(k, x.iter().copied())).or_insert_with(Rational::zero) += p;
        }
    });
    out
}

/// Re-checks an extendibility report by enumerating sequences: a witness
/// must be exchangeable on `S^N` with marginal `P`; a refutation must have
/// `E g > 1 = sup |U g|`. The reported norm must be 1 exactly when the law
/// extends.
pub fn extend_report_holds(law: &ExchangeableLaw, report: &ExtendReport) -> bool {
    let one = Rational::one();
    match (report.verdict, &report.witness, &report.refutation) {
        (Verdict::Extendible, Some(q), None) => {
            q.n() == report.big_n && marginal_by_points(q, law.n()) == *law.weights() && report.norm == one
        }
        (Verdict::NotExtendible, None, Some(g)) => {
            symmetrized_sup_norm(g, report.big_n) == one
                && expectation_by_points(law, g) > one
                && report.norm > one
        }
        _ => false,
    }
}

/// Result of vertex enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOutcome {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub point: Option<Vec<Rational>>,
    pub vertices: usize,
}

/// Solves `lp` by enumerating the vertices and extreme rays of its
/// feasible region. The region must be pointed: the constraint rows
/// together with the sign constraints must have full column rank.
/// `max_systems` caps the number of linear systems examined.
pub fn lp_by_vertex_enumeration(lp: &LinearProgram<Rational>, max_systems: u128) -> Result<VertexOutcome> {
    lp.validate()?;
    let n = lp.num_vars();
    let c = lp.max_objective();

    // inequalities g.x <= h and equalities e.x = f, all in integers
    let mut ineq: Vec<Vec<BigInt>> = Vec::new();
    let mut eq: Vec<Vec<Rational>> = Vec::new();
    for con in &lp.constraints {
        let mut row = vec![Rational::zero(); n + 1];
        for (j, a) in &con.coeffs {
            row[*j] = a.clone();
        }
        row[n] = con.rhs.clone();
        match con.relation {
            Relation::Le => ineq.push(integer_row(&row)),
            Relation::Ge => ineq.push(integer_row(&row.iter().map(|v| -v).collect::<Vec<_>>())),
            Relation::Eq => eq.push(row),
        }
    }
    for j in 0..n {
        if lp.lower[j] == LowerBound::Zero {
            let mut row = vec![BigInt::zero(); n + 1];
            row[j] = -BigInt::one();
            ineq.push(row);
        }
        if let Some(u) = &lp.upper[j] {
            let mut row = vec![Rational::zero(); n + 1];
            row[j] = Rational::one();
            row[n] = u.clone();
            ineq.push(integer_row(&row));
        }
    }

    // independent equalities; an inconsistent system is infeasible outright
    let Some(eq) = reduce_equalities(eq, n) else {
        return Ok(VertexOutcome {
            status: LpStatus::Infeasible,
            value: None,
            point: None,
            vertices: 0,
        });
    };
    let eq: Vec<Vec<BigInt>> = eq.iter().map(|r| integer_row(r)).collect();

    let all: Vec<Vec<BigInt>> = eq.iter().chain(&ineq).cloned().collect();
    let mut probe = all;
    let (rank, _) = gauss_jordan(&mut probe, n)
        .ok_or_else(|| Error::Internal("inexact fraction-free division".into()))?;
    if rank < n {
        return Err(Error::input(
            "vertex enumeration needs a pointed region (full column rank)",
        ));
    }

    let r_eq = eq.len();
    let choose = n - r_eq;
    let systems = binom(ineq.len() as u128, choose as u128)
        + if choose > 0 { binom(ineq.len() as u128, choose as u128 - 1) } else { 0 };
    if systems > max_systems {
        return Err(Error::Capacity {
            what: "vertex enumeration systems",
            size: systems,
            cap: max_systems,
        });
    }

    let small_ineq = to_ring::<i128>(&ineq);
    let small_eq = to_ring::<i128>(&eq);

    // vertices
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut vertices = 0usize;
    for_each_subset(ineq.len(), choose, |subset| {
        let Some(x) = solve_square(&small_eq, &small_ineq, &eq, &ineq, subset, n) else {
            return;
        };
        if !ineq.iter().all(|g| satisfies(g, &x)) {
            return;
        }
        vertices += 1;
        let value = dot(&c, &x);
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, x));
        }
    });
    let Some((_, point)) = best else {
        return Ok(VertexOutcome {
            status: LpStatus::Infeasible,
            value: None,
            point: None,
            vertices: 0,
        });
    };

    // extreme rays of the recession cone
    let mut unbounded = false;
    if choose > 0 {
        for_each_subset(ineq.len(), choose - 1, |subset| {
            if unbounded {
                return;
            }
            let Some(r) = null_direction(&small_eq, &small_ineq, &eq, &ineq, subset, n) else {
                return;
            };
            for sign in [1i32, -1] {
                let r: Vec<Rational> = r.iter().map(|v| v * Rational::from_integer(sign.into())).collect();
                let in_cone = ineq.iter().all(|g| {
                    let lhs: Rational = g[..n]
                        .iter()
                        .zip(&r)
                        .map(|(a, v)| Rational::from_integer(a.clone()) * v)
                        .sum();
                    !lhs.is_positive()
                });
                if in_cone && dot(&c, &r).is_positive() {
                    unbounded = true;
                }
            }
        });
    }
    if unbounded {
        return Ok(VertexOutcome {
            status: LpStatus::Unbounded,
            value: None,
            point: Some(point),
            vertices,
        });
    }
    let value = dot(&lp.objective, &point);
    Ok(VertexOutcome {
        status: LpStatus::Optimal,
        value: Some(value),
        point: Some(point),
        vertices,
    })
}

fn dot(c: &[Rational], x: &[Rational]) -> Rational {
    c.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect()
}

fn satisfies(g: &[BigInt], x: &[Rational]) -> bool {
    let n = x.len();
    let lhs: Rational = g[..n]
        .iter()
        .zip(x)
        .map(|(a, v)| Rational::from_integer(a.clone()) * v)
        .sum();
    lhs <= Rational::from_integer(g[n].clone())
}

/// Row-reduces `[E | f]`; `None` if inconsistent.
fn reduce_equalities(mut rows: Vec<Vec<Rational>>, n: usize) -> Option<Vec<Vec<Rational>>> {
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v = &*v / &pivot;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=n {
                    let d = &f * &rows[rank][j];
                    rows[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    rows.truncate(rank);
    Some(rows)
}

fn for_each_subset(len: usize, size: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            visit(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..=len.saturating_sub(need) {
            if len - i < need {
                break;
            }
            cur.push(i);
            rec(i + 1, len, size, cur, visit);
            cur.pop();
        }
    }
    if size > len {
        return;
    }
    rec(0, len, size, &mut Vec::with_capacity(size), &mut visit);
}

/// Integer arithmetic for fraction-free elimination; `None` on overflow
/// or inexact division.
trait Ring: Clone + PartialEq + Sized {
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    /// `(a * b - c * d) / div`
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, div: &Self) -> Option<Self>;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, div: &Self) -> Option<Self> {
        let num = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        (num % div == 0).then(|| num / div)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, div: &Self) -> Option<Self> {
        let num = a * b - c * d;
        let (q, r) = num.div_rem(div);
        Zero::is_zero(&r).then_some(q)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn to_ring<R: Ring>(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<R>>> {
    rows.iter()
        .map(|r| r.iter().map(R::from_big).collect::<Option<Vec<_>>>())
        .collect()
}

/// Fraction-free Gauss-Jordan elimination over the first `n` columns.
///
/// Each step replaces every non-pivot row by `(p * row - f * pivot_row) / d`
/// where `p` is the current pivot and `d` the previous one; the division is
/// exact. At the end every pivot row holds the same value (the last pivot)
/// in its pivot column and zeros in the other pivot columns.
/// Returns the rank and the pivot columns; `None` on overflow.
fn gauss_jordan<R: Ring>(m: &mut [Vec<R>], n: usize) -> Option<(usize, Vec<usize>)> {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = R::unit();
    let mut pivots = Vec::new();
    for col in 0..n {
        let rank = pivots.len();
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_nil()) else {
            continue;
        };
        m.swap(rank, p);
        let piv = m[rank][col].clone();
        for i in 0..rows {
            if i == rank {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..width {
                m[i][j] = R::mul_sub_div(&piv, &m[i][j], &f, &m[rank][j], &prev)?;
            }
        }
        prev = piv;
        pivots.push(col);
    }
    Some((pivots.len(), pivots))
}

enum Elim {
    Done(Vec<Vec<BigInt>>, usize, Vec<usize>),
    Overflow,
}

/// Runs elimination in `i128` when the data fit, else (or on overflow) in
/// `BigInt`.
fn eliminate(small: Option<Vec<Vec<i128>>>, big: Vec<Vec<BigInt>>, n: usize) -> Elim {
    if let Some(mut m) = small {
        if let Some((rank, piv)) = gauss_jordan(&mut m, n) {
            let m = m.iter().map(|r| r.iter().map(Ring::to_big).collect()).collect();
            return Elim::Done(m, rank, piv);
        }
    }
    let mut m = big;
    match gauss_jordan(&mut m, n) {
        Some((rank, piv)) => Elim::Done(m, rank, piv),
        None => Elim::Overflow,
    }
}

fn pick<T: Clone>(eq: &[Vec<T>], ineq: &[Vec<T>], subset: &[usize], width: usize) -> Vec<Vec<T>> {
    eq.iter()
        .chain(subset.iter().map(|&i| &ineq[i]))
        .map(|r| r[..width].to_vec())
        .collect()
}

/// Unique solution of the equalities plus the chosen inequalities held
/// tight, if the system is nonsingular.
fn solve_square(
    small_eq: &Option<Vec<Vec<i128>>>,
    small_ineq: &Option<Vec<Vec<i128>>>,
    eq: &[Vec<BigInt>],
    ineq: &[Vec<BigInt>],
    subset: &[usize],
    n: usize,
) -> Option<Vec<Rational>> {
    let small = match (small_eq, small_ineq) {
        (Some(e), Some(g)) => Some(pick(e, g, subset, n + 1)),
        _ => None,
    };
    let Elim::Done(m, rank, _) = eliminate(small, pick(eq, ineq, subset, n + 1), n) else {
        return None;
    };
    if rank < n {
        return None;
    }
    let d = m[n - 1][n - 1].clone();
    Some((0..n).map(|i| Rational::new(m[i][n].clone(), d.clone())).collect())
}

/// Spanning vector of the null space of the equalities plus the chosen
/// inequality rows, if that null space is a line.
fn null_direction(
    small_eq: &Option<Vec<Vec<i128>>>,
    small_ineq: &Option<Vec<Vec<i128>>>,
    eq: &[Vec<BigInt>],
    ineq: &[Vec<BigInt>],
    subset: &[usize],
    n: usize,
) -> Option<Vec<Rational>> {
    let small = match (small_eq, small_ineq) {
        (Some(e), Some(g)) => Some(pick(e, g, subset, n)),
        _ => None,
    };
    let Elim::Done(m, rank, pivots) = eliminate(small, pick(eq, ineq, subset, n), n) else {
        return None;
    };
    if rank != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let d = if rank == 0 {
        BigInt::one()
    } else {
        m[0][pivots[0]].clone()
    };
    let mut r = vec![Rational::zero(); n];
    r[free] = Rational::from_integer(d);
    for (i, &c) in pivots.iter().enumerate() {
        r[c] = Rational::from_integer(-m[i][free].clone());
    }
    Some(r)
}
