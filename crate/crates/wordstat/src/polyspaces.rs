//! Discrete orthogonal polynomials on the simplex `Δ_kr` and their image in
//! two-letter words.
//!
//! A word over `{1,2}` with `r` twos is determined by the run lengths of ones
//! `1^{d_0} 2 1^{d_1} ⋯ 2 1^{d_r}`, a point of `Δ_kr`. A polynomial in
//! `x_0..x_r` becomes a combination of such words by evaluating it at each
//! point. Letters `1` and `2` are indices 0 and 1.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::onesample::{fill_rho, pi_word, rho_word, v_words};
use crate::rational::{fmt_rational, primitive, qi, Q};
use crate::words::{index_map, Combination, Word};

/// A sparse polynomial over `ℚ` in `x_0..x_{nvars−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Poly::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Q::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Q) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Builds from `(coefficient, exponents)` pairs with integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        let mut p = Poly::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e.to_vec(), qi(*c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.nvars = self.nvars.max(other.nvars);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            for (f, y) in &other.terms {
                let g = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, x * y);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::constant(self.nvars, Q::one()), |acc, _| acc.mul(self))
    }

    /// Evaluates at an integer point; missing coordinates count as zero.
    pub fn eval(&self, x: &[i64]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    v *= qi(x.get(i).copied().unwrap_or(0).pow(k));
                }
            }
            s += v;
        }
        s
    }

    /// Replaces `x_i` by the polynomial `q`.
    pub fn substitute(&self, i: usize, q: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = std::mem::take(&mut rest[i]);
            out = out.add(&Poly::monomial(rest, c.clone()).mul(&q.pow(k)));
        }
        out
    }

    /// Rescales to coprime integer coefficients with the first displayed
    /// coefficient positive.
    pub fn primitive(&self) -> Poly {
        let order = self.display_order();
        let coeffs: Vec<Q> = order.iter().map(|e| self.terms[*e].clone()).collect();
        let scaled = primitive(&coeffs);
        let mut out = Poly::zero(self.nvars);
        for (e, c) in order.into_iter().zip(scaled) {
            out.add_term(e.clone(), c);
        }
        out
    }

    /// Monomials by descending degree, then descending exponent vectors.
    fn display_order(&self) -> Vec<&Vec<u32>> {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        keys
    }

    /// Permutes variables so that `x_i` becomes `x_{n−1−i}`.
    pub fn reverse_variables(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut r = e.clone();
            r.reverse();
            out.add_term(r, c.clone());
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, e) in self.display_order().into_iter().enumerate() {
            let c = &self.terms[e];
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rational(&mag))?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `Δ_kr`: tuples `(d_0..d_r)` of nonnegative integers summing to `k − r`,
/// in lexicographic order.
pub fn simplex(k: usize, r: usize) -> Vec<Vec<i64>> {
    fn rec(parts: usize, total: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=total {
            prefix.push(x);
            rec(parts - 1, total - x, prefix, out);
            prefix.pop();
        }
    }
    assert!(r <= k, "r must not exceed k");
    let mut out = Vec::new();
    rec(r + 1, (k - r) as i64, &mut Vec::new(), &mut out);
    out
}

/// `⟨P, Q⟩_kr = Σ_{d∈Δ_kr} P(d) Q(d)`.
pub fn pairing(p: &Poly, q: &Poly, k: usize, r: usize) -> Q {
    simplex(k, r)
        .iter()
        .fold(Q::zero(), |acc, d| acc + p.eval(d) * q.eval(d))
}

/// Monomials in `x_1..x_r` of total degree `deg`, with `x_1` powers first.
fn monomials_of_degree(r: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in (0..=deg).rev() {
            prefix.push(x);
            rec(vars - 1, deg - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if deg == 0 {
            out.push(vec![0]);
        }
        return out;
    }
    rec(r, deg, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|e| std::iter::once(0).chain(e).collect())
        .collect()
}

/// Bases of `U_krm` for `m = 0..=k−r`: Gram–Schmidt under `⟨·,·⟩_kr` on the
/// monomials in `x_1..x_r`, grouped by degree. Polynomials use `r + 1`
/// variables with `x_0` absent.
pub fn orthogonal_poly_spaces(k: usize, r: usize) -> Result<Vec<Vec<Poly>>> {
    if r > k {
        return Err(Error::OutOfRange(format!("r = {r} > k = {k}")));
    }
    let points = simplex(k, r);
    let values = |p: &Poly| -> Vec<Q> { points.iter().map(|d| p.eval(d)).collect() };
    let dot = |a: &[Q], b: &[Q]| a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y);
    let mut done: Vec<(Poly, Vec<Q>, Q)> = Vec::new();
    let mut out = Vec::new();
    for m in 0..=(k - r) as u32 {
        let mut level = Vec::new();
        for e in monomials_of_degree(r, m) {
            let mut p = Poly::monomial(e, Q::one());
            let mut v = values(&p);
            for (b, bv, nb) in &done {
                let c = dot(&v, bv) / nb;
                if !c.is_zero() {
                    p = p.sub(&b.scale(&c));
                    v = v.iter().zip(bv).map(|(x, y)| x - &c * y).collect();
                }
            }
            let n = dot(&v, &v);
            if n.is_zero() {
                continue;
            }
            let p = p.primitive();
            let v = values(&p);
            let n = dot(&v, &v);
            done.push((p.clone(), v, n));
            level.push(p);
        }
        out.push(level);
    }
    Ok(out)
}

/// The `{1,2}`-word `1^{d_0} 2 1^{d_1} ⋯ 2 1^{d_r}`.
pub fn simplex_word(d: &[i64]) -> Word {
    let mut w = Vec::new();
    for (i, &x) in d.iter().enumerate() {
        if i > 0 {
            w.push(1);
        }
        w.extend(std::iter::repeat_n(0u8, x as usize));
    }
    w
}

/// `Ψ_kr(P) = Σ_{d∈Δ_kr} P(d) · 1^{d_0} 2 ⋯ 2 1^{d_r}`.
pub fn psi(p: &Poly, k: usize, r: usize) -> Combination {
    let mut out = Combination::zero();
    for d in simplex(k, r) {
        out.add_term(simplex_word(&d), p.eval(&d));
    }
    out
}

/// `Ψ_kr(U_krm)` as a subspace of `ℚ^{V_kr}`.
pub fn psi_space(k: usize, r: usize, m: usize) -> Result<Subspace> {
    let spaces = orthogonal_poly_spaces(k, r)?;
    let basis = spaces
        .get(m)
        .ok_or_else(|| Error::OutOfRange(format!("m = {m} > k − r = {}", k - r)))?;
    let words = v_words(k, r);
    let idx = index_map(&words);
    let vectors: Result<Vec<Vec<Q>>> = basis
        .iter()
        .map(|p| psi(p, k, r).to_vector(&idx, words.len()))
        .collect();
    Ok(Subspace::new(words.len(), vectors?))
}

/// `Φ_kr(e) = (π(e), ρ(e))` for a D-word with exactly `r` non-1 letters.
pub fn phi(e: &[u8], k: usize, r: usize) -> Result<(Word, Word)> {
    if e.len() != k {
        return Err(Error::LengthMismatch(format!(
            "word length {} ≠ {k}",
            e.len()
        )));
    }
    let ones = e.iter().filter(|&&x| x == 0).count();
    if ones + r != k {
        return Err(Error::OutOfRange(format!(
            "word has {} non-1 letters, expected {r}",
            k - ones
        )));
    }
    Ok((pi_word(e), rho_word(e)))
}

/// Inverse of [`phi`].
pub fn phi_inverse(pi: &[u8], rho: &[u8]) -> Result<Word> {
    let twos = pi.iter().filter(|&&x| x != 0).count();
    if twos != rho.len() || rho.contains(&0) {
        return Err(Error::LengthMismatch(format!(
            "{twos} slots for {} letters",
            rho.len()
        )));
    }
    Ok(fill_rho(pi, rho))
}

/// Homogenizes `P ∈ U_krm` to degree `m` by replacing the constant `1` with
/// `(x_0 + ⋯ + x_r)/(k − r)`, then rescales to a primitive polynomial.
pub fn homogenize(p: &Poly, k: usize, r: usize, m: usize) -> Result<Poly> {
    if k == r {
        return if m == 0 {
            Ok(p.primitive())
        } else {
            Err(Error::OutOfRange("no positive degrees when k = r".into()))
        };
    }
    let n = r + 1;
    let s = (0..n)
        .fold(Poly::zero(n), |acc, i| acc.add(&Poly::var(n, i)))
        .scale(&Q::new(1.into(), ((k - r) as i64).into()));
    let mut out = Poly::zero(n);
    for (e, c) in p.terms() {
        let j = e.iter().sum::<u32>() as usize;
        if j > m {
            return Err(Error::OutOfRange(format!(
                "term of degree {j} exceeds m = {m}"
            )));
        }
        out = out.add(&Poly::monomial(e.clone(), c.clone()).mul(&s.pow((m - j) as u32)));
    }
    Ok(out.primitive())
}

/// Substitutes `x_0 = (k − r) − (x_1 + ⋯ + x_r)`.
pub fn dehomogenize(h: &Poly, k: usize, r: usize) -> Poly {
    let n = h.nvars();
    let x0 = (1..n).fold(Poly::constant(n, qi((k - r) as i64)), |acc, i| {
        acc.sub(&Poly::var(n, i))
    });
    h.substitute(0, &x0)
}

/// Bases of `H_krm`, the homogenized `U_krm`.
pub fn homogeneous_spaces(k: usize, r: usize) -> Result<Vec<Vec<Poly>>> {
    orthogonal_poly_spaces(k, r)?
        .into_iter()
        .enumerate()
        .map(|(m, basis)| basis.iter().map(|p| homogenize(p, k, r, m)).collect())
        .collect()
}

/// `sha*_kr P = (1 + k − r − Σ x_i) P(x) + Σ x_i P(x − e_i)`, `i = 1..r`.
pub fn sha_star(p: &Poly, k: usize, r: usize) -> Poly {
    let n = p.nvars();
    let one = Poly::constant(n, Q::one());
    let mut lead = Poly::constant(n, qi((1 + k - r) as i64));
    let mut tail = Poly::zero(n);
    for i in 1..n {
        let xi = Poly::var(n, i);
        lead = lead.sub(&xi);
        tail = tail.add(&xi.mul(&p.substitute(i, &xi.sub(&one))));
    }
    lead.mul(p).add(&tail)
}
