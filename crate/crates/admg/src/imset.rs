//! Integer-valued functions on the subset lattice.
//!
//! An [`Imset`] over a ground set of size `n` is a dense vector of `2^n`
//! values indexed by subset bitmask. The four transforms are in-place
//! butterflies over the `n` coordinate directions:
//!
//! * `zeta_down(u)(A) = Σ_{B ⊆ A} u(B)`, inverted by `mobius_down`;
//! * `zeta_up(u)(A) = Σ_{B ⊇ A} u(B)`, inverted by `mobius_up`.

use std::fmt;

use crate::error::{Error, Result};
use crate::separation::Triple;
use crate::vset::{VertexSet, MAX_VERTICES};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Imset {
    n: usize,
    values: Vec<i64>,
}

impl Imset {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "ground set too large");
        Imset {
            n,
            values: vec![0; 1 << n],
        }
    }

    pub fn from_values(n: usize, values: Vec<i64>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::Precondition(format!(
                "imset on {n} elements needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(Imset { n, values })
    }

    /// Indicator of a single set.
    pub fn delta(n: usize, s: VertexSet) -> Self {
        let mut u = Imset::zero(n);
        u.values[s.index()] = 1;
        u
    }

    /// Indicator of a family of sets; repeated members count once.
    pub fn delta_family<I: IntoIterator<Item = VertexSet>>(n: usize, family: I) -> Self {
        let mut u = Imset::zero(n);
        for s in family {
            u.values[s.index()] = 1;
        }
        u
    }

    /// Indicator of `{S ⊆ ABC : S ⊄ AC, S ⊄ BC}`.
    pub fn delta_triple(n: usize, t: &Triple) -> Self {
        let ac = t.a | t.c;
        let bc = t.b | t.c;
        Imset::delta_family(
            n,
            t.union()
                .subsets()
                .filter(|s| !s.is_subset(ac) && !s.is_subset(bc)),
        )
    }

    /// `δ_{abC} + δ_C − δ_{aC} − δ_{bC}` for singletons.
    pub fn elementary(n: usize, a: usize, b: usize, c: VertexSet) -> Result<Self> {
        let t = Triple::new(VertexSet::singleton(a), VertexSet::singleton(b), c)?;
        if a == b {
            return Err(Error::Precondition("elementary imset needs a != b".into()));
        }
        Ok(Imset::semi_elementary(n, &t))
    }

    /// `δ_{ABC} + δ_C − δ_{AC} − δ_{BC}`; zero when `A` or `B` is empty.
    pub fn semi_elementary(n: usize, t: &Triple) -> Self {
        let mut u = Imset::zero(n);
        u.values[(t.a | t.b | t.c).index()] += 1;
        u.values[t.c.index()] += 1;
        u.values[(t.a | t.c).index()] -= 1;
        u.values[(t.b | t.c).index()] -= 1;
        u
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: VertexSet) -> i64 {
        self.values[s.index()]
    }

    #[inline]
    pub fn set(&mut self, s: VertexSet, v: i64) {
        self.values[s.index()] = v;
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Sets with non-zero value, in increasing bitmask order.
    pub fn support(&self) -> impl Iterator<Item = (VertexSet, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (VertexSet::from_bits(i as u32), v))
    }

    fn same_ground(&self, other: &Imset) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Precondition(format!(
                "ground sets differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Imset) -> Result<Imset> {
        let mut u = self.clone();
        u.add_assign_checked(other)?;
        Ok(u)
    }

    pub fn checked_sub(&self, other: &Imset) -> Result<Imset> {
        let mut u = self.clone();
        u.add_scaled_checked(other, -1)?;
        Ok(u)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Imset> {
        let mut u = Imset::zero(self.n);
        u.add_scaled_checked(self, k)?;
        Ok(u)
    }

    pub fn add_assign_checked(&mut self, other: &Imset) -> Result<()> {
        self.add_scaled_checked(other, 1)
    }

    /// `self += k * other`.
    pub fn add_scaled_checked(&mut self, other: &Imset, k: i64) -> Result<()> {
        self.same_ground(other)?;
        for (x, &y) in self.values.iter_mut().zip(&other.values) {
            *x = y
                .checked_mul(k)
                .and_then(|p| x.checked_add(p))
                .ok_or(Error::Overflow("imset arithmetic"))?;
        }
        Ok(())
    }

    fn butterfly(&self, up: bool, sign: i64) -> Result<Imset> {
        let mut v = self.values.clone();
        for i in 0..self.n {
            let bit = 1usize << i;
            for s in 0..v.len() {
                if s & bit == 0 {
                    // down: v[s|bit] gathers from v[s]; up: v[s] gathers from v[s|bit]
                    let (dst, src) = if up { (s, s | bit) } else { (s | bit, s) };
                    v[dst] = v[src]
                        .checked_mul(sign)
                        .and_then(|t| v[dst].checked_add(t))
                        .ok_or(Error::Overflow("lattice transform"))?;
                }
            }
        }
        Ok(Imset { n: self.n, values: v })
    }

    /// `A ↦ Σ_{B ⊆ A} u(B)`.
    pub fn zeta_down(&self) -> Result<Imset> {
        self.butterfly(false, 1)
    }

    /// `A ↦ Σ_{B ⊆ A} (−1)^{|A∖B|} u(B)`.
    pub fn mobius_down(&self) -> Result<Imset> {
        self.butterfly(false, -1)
    }

    /// `A ↦ Σ_{B ⊇ A} u(B)`.
    pub fn zeta_up(&self) -> Result<Imset> {
        self.butterfly(true, 1)
    }

    /// `A ↦ Σ_{B ⊇ A} (−1)^{|B∖A|} u(B)`.
    pub fn mobius_up(&self) -> Result<Imset> {
        self.butterfly(true, -1)
    }

    /// `Σ_S u(S) · f(S)`. For a structural imset whose independence model
    /// holds in a positive density, `f = S ↦ log f_S(x)` gives zero at every
    /// point `x`.
    pub fn pair_with<F: FnMut(VertexSet) -> f64>(&self, mut f: F) -> f64 {
        self.support().map(|(s, v)| v as f64 * f(s)).sum()
    }
}

impl fmt::Debug for Imset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.support())
            .finish()
    }
}

/// `Σ_S u(S) · logdens(S)`; zero for a structural imset whose model holds in
/// the density.
pub fn imset_factor_check<F: FnMut(VertexSet) -> f64>(u: &Imset, logdens: F) -> f64 {
    u.pair_with(logdens)
}

/// A positive rational `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coef {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Coef {
    pub const ONE: Coef = Coef { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(Error::Precondition(format!(
                "certificate coefficient {num}/{den} is not positive"
            )));
        }
        let (num, den) = (num as u64, den as u64);
        let g = gcd(num, den);
        Ok(Coef {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(k: i64) -> Result<Self> {
        Coef::new(k, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A non-negative combination of semi-elementary imsets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemiElemCombination {
    pub terms: Vec<(Triple, Coef)>,
}

impl SemiElemCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: Triple) {
        self.terms.push((t, Coef::ONE));
    }

    pub fn push_with(&mut self, t: Triple, k: Coef) {
        self.terms.push((t, k));
    }

    pub fn extend(&mut self, other: SemiElemCombination) {
        self.terms.extend(other.terms);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.terms.iter().map(|(t, _)| t)
    }

    /// `Σ k · u_t`. Fails if the rational sum is not integer valued.
    pub fn evaluate(&self, n: usize) -> Result<Imset> {
        let mut lcm: u64 = 1;
        for (_, k) in &self.terms {
            lcm = lcm / gcd(lcm, k.den) * k.den;
        }
        let mut acc = Imset::zero(n);
        for (t, k) in &self.terms {
            let w = i64::try_from(k.num * (lcm / k.den))
                .map_err(|_| Error::Overflow("certificate coefficients"))?;
            acc.add_scaled_checked(&Imset::semi_elementary(n, t), w)?;
        }
        if lcm == 1 {
            return Ok(acc);
        }
        let l = lcm as i64;
        if acc.values.iter().any(|v| v % l != 0) {
            return Err(Error::Precondition(
                "certificate does not evaluate to an integer imset".into(),
            ));
        }
        acc.values.iter_mut().for_each(|v| *v /= l);
        Ok(acc)
    }

    /// The same combination with every triple split into elementary triples.
    pub fn to_elementary(&self) -> SemiElemCombination {
        let mut out = SemiElemCombination::new();
        for (t, k) in &self.terms {
            for e in elementary_expansion(t) {
                out.push_with(e, *k);
            }
        }
        out
    }
}

/// Splits `<A, B | C>` into elementary triples whose imsets sum to
/// `u_{<A,B|C>}`: with `A = a1..ak`, `B = b1..bl`, the terms are
/// `<a_i, b_j | C a_1..a_{i-1} b_1..b_{j-1}>`.
pub fn elementary_expansion(t: &Triple) -> Vec<Triple> {
    let mut out = Vec::new();
    let mut before_a = VertexSet::EMPTY;
    for a in t.a {
        let mut before_b = VertexSet::EMPTY;
        for b in t.b {
            out.push(Triple {
                a: VertexSet::singleton(a),
                b: VertexSet::singleton(b),
                c: t.c | before_a | before_b,
            });
            before_b = before_b.with(b);
        }
        before_a = before_a.with(a);
    }
    out
}

pub fn evaluate_certificate(c: &SemiElemCombination, n: usize) -> Result<Imset> {
    c.evaluate(n)
}

pub fn is_certified_structural(c: &SemiElemCombination, u: &Imset) -> bool {
    c.evaluate(u.n()).is_ok_and(|v| &v == u)
}

#[cfg(test)]
mod tests;
