//! Exact dense linear algebra over the rationals.
//!
//! Row reduction runs fraction-free (Bareiss) on integer-scaled rows and is
//! finished in the rationals to a canonical reduced echelon form. Spectra are
//! found by kernel computations at candidate eigenvalues, falling back to the
//! rational roots of the minimal polynomial.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, qb, Q};

/// Dense rational matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows,
        }
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| qb(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.data[i][j] == self.data[j][i]))
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn pow(&self, e: usize) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    // Integer-scale each row, then eliminate fraction-free.
    let mut a: Vec<Vec<BigInt>> = m
        .data
        .iter()
        .map(|r| {
            let den = common_denominator(r.iter());
            r.iter()
                .map(|x| (x * qb(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                for j in c + 1..cols {
                    a[i][j] = &a[r][c] * &a[i][j] / &prev;
                }
                continue;
            }
            for j in c + 1..cols {
                a[i][j] = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let mut q: Vec<Vec<Q>> = a[..r]
        .iter()
        .map(|row| row.iter().map(|x| qb(x.clone())).collect())
        .collect();
    // Normalize and back-substitute.
    for (i, &c) in pivots.iter().enumerate().rev() {
        let inv = Q::one() / &q[i][c];
        for x in q[i].iter_mut() {
            *x *= &inv;
        }
        for k in 0..i {
            if q[k][c].is_zero() {
                continue;
            }
            let f = q[k][c].clone();
            for j in c..cols {
                let t = &f * &q[i][j];
                q[k][j] -= t;
            }
        }
    }
    let out = Matrix {
        rows: q.len(),
        cols,
        data: q,
    };
    (out, pivots)
}

/// Null space of `m` as a subspace of `Q^cols`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = rref(m);
    let cols = m.cols;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let vectors = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.data[i][f].clone();
            }
            v
        })
        .collect();
    Subspace::new(cols, vectors)
}

/// Solves `A x = b` for one solution, if any.
pub fn solve(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let mut aug = a.clone();
    for (i, row) in aug.data.iter_mut().enumerate() {
        row.push(b[i].clone());
    }
    aug.cols += 1;
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![Q::zero(); a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.data[i][a.cols].clone();
    }
    Some(x)
}

/// A linear subspace of `Q^ambient` with a chosen basis and its canonical
/// reduced echelon form.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    vectors: Vec<Vec<Q>>,
    echelon: Vec<Vec<Q>>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.echelon == other.echelon
    }
}

impl Eq for Subspace {}

impl Subspace {
    /// Span of `vectors`; dependent vectors are dropped, keeping the first
    /// independent ones in order.
    pub fn new(ambient: usize, vectors: Vec<Vec<Q>>) -> Self {
        let mut kept: Vec<Vec<Q>> = Vec::new();
        let mut ech: Vec<Vec<Q>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length");
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let mut rows = ech.clone();
            rows.push(v.clone());
            let (r, p) = rref(&Matrix::from_rows(rows));
            if p.len() > ech.len() {
                kept.push(v);
                ech = r.data;
            }
        }
        Subspace {
            ambient,
            vectors: kept,
            echelon: ech,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            vectors: Vec::new(),
            echelon: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let id = Matrix::identity(ambient);
        Subspace {
            ambient,
            vectors: id.data.clone(),
            echelon: id.data,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Q>] {
        &self.vectors
    }

    pub fn echelon(&self) -> &[Vec<Q>] {
        &self.echelon
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut rows = self.echelon.clone();
        rows.push(v.to_vec());
        rref(&Matrix::from_rows(rows)).1.len() == self.echelon.len()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.vectors.clone();
        v.extend(other.vectors.iter().cloned());
        Subspace::new(self.ambient, v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let mut cols: Vec<Vec<Q>> = self.vectors.clone();
        cols.extend(other.vectors.iter().map(|v| v.iter().map(|x| -x).collect()));
        let k = kernel(&Matrix::from_cols(self.ambient, &cols));
        let vectors = k
            .vectors
            .iter()
            .map(|c| combine(&self.vectors, &c[..self.dim()]))
            .collect();
        Subspace::new(self.ambient, vectors)
    }

    /// Coordinates of `v` in the chosen basis.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        if self.dim() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        solve(&Matrix::from_cols(self.ambient, &self.vectors), v)
    }

    /// Image under `m`.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::new(m.rows, self.vectors.iter().map(|v| m.mul_vec(v)).collect())
    }
}

/// `Σ c_i v_i`.
pub fn combine(vectors: &[Vec<Q>], coeffs: &[Q]) -> Vec<Q> {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut out = vec![Q::zero(); n];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// A symmetric bilinear form on `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BilinearForm {
    /// `Σ u_i v_i`.
    Standard,
    /// `Σ w_i u_i v_i`.
    Diagonal(Vec<Q>),
    /// `uᵀ G v`.
    Gram(Matrix),
}

impl BilinearForm {
    pub fn apply(&self, u: &[Q], v: &[Q]) -> Q {
        match self {
            BilinearForm::Standard => u
                .iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Q::zero(), |acc, (a, b)| acc + a * b),
            BilinearForm::Diagonal(w) => u
                .iter()
                .zip(v)
                .zip(w)
                .filter(|((a, b), _)| !a.is_zero() && !b.is_zero())
                .fold(Q::zero(), |acc, ((a, b), c)| acc + a * b * c),
            BilinearForm::Gram(g) => {
                let gv = g.mul_vec(v);
                BilinearForm::Standard.apply(u, &gv)
            }
        }
    }

    pub fn gram(&self, vectors: &[Vec<Q>]) -> Matrix {
        let n = vectors.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = self.apply(&vectors[i], &vectors[j]);
                g.data[j][i] = x.clone();
                g.data[i][j] = x;
            }
        }
        g
    }

    /// Exact LDLᵀ check with strictly positive pivots, on `Q^n`.
    pub fn is_positive_definite(&self, n: usize) -> bool {
        match self {
            BilinearForm::Standard => true,
            BilinearForm::Diagonal(w) => w.len() == n && w.iter().all(Signed::is_positive),
            BilinearForm::Gram(g) => g.is_symmetric() && g.rows == n && ldl_positive(g),
        }
    }
}

fn ldl_positive(g: &Matrix) -> bool {
    let n = g.rows;
    let mut a = g.data.clone();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

/// Complement of `s` inside `within`, orthogonal under `form`.
pub fn orthogonal_complement(
    s: &Subspace,
    within: &Subspace,
    form: &BilinearForm,
) -> Result<Subspace> {
    if !within.contains_space(s) {
        return Err(Error::NotContained);
    }
    if s.dim() == 0 {
        return Ok(within.clone());
    }
    let mut m = Matrix::zeros(s.dim(), within.dim());
    for (i, u) in s.vectors.iter().enumerate() {
        for (j, b) in within.vectors.iter().enumerate() {
            m.data[i][j] = form.apply(u, b);
        }
    }
    let k = kernel(&m);
    let t = Subspace::new(
        within.ambient,
        k.vectors
            .iter()
            .map(|c| combine(&within.vectors, c))
            .collect(),
    );
    if t.dim() + s.dim() != within.dim() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(t)
}

/// Orthogonal projection of `v` onto `s` under `form`.
pub fn project(v: &[Q], s: &Subspace, form: &BilinearForm) -> Result<Vec<Q>> {
    if s.dim() == 0 {
        return Ok(vec![Q::zero(); v.len()]);
    }
    let g = form.gram(&s.vectors);
    let rhs: Vec<Q> = s.vectors.iter().map(|b| form.apply(b, v)).collect();
    let c = solve(&g, &rhs).ok_or(Error::NotPositiveDefinite)?;
    Ok(combine(&s.vectors, &c))
}

/// Matrix of the orthogonal projector onto `s` in the ambient coordinates.
pub fn projector(s: &Subspace, form: &BilinearForm) -> Result<Matrix> {
    let n = s.ambient;
    let cols: Result<Vec<Vec<Q>>> = (0..n)
        .map(|j| {
            let mut e = vec![Q::zero(); n];
            e[j] = Q::one();
            project(&e, s, form)
        })
        .collect();
    Ok(Matrix::from_cols(n, &cols?))
}

/// Matrix of `m` restricted to the invariant subspace `s`, in its basis.
pub fn restrict(m: &Matrix, s: &Subspace) -> Result<Matrix> {
    let cols: Option<Vec<Vec<Q>>> = s
        .vectors
        .iter()
        .map(|v| s.coordinates(&m.mul_vec(v)))
        .collect();
    let cols = cols.ok_or(Error::NotInvariant)?;
    Ok(Matrix::from_cols(s.dim(), &cols))
}

/// Splits the invariant subspace `s` into eigenspaces of `m`, largest
/// eigenvalue first. `candidates` are tried first; any remainder is resolved
/// through the rational roots of the minimal polynomial.
pub fn eigen_split(m: &Matrix, s: &Subspace, candidates: &[Q]) -> Result<Vec<(Q, Subspace)>> {
    let a = restrict(m, s)?;
    let n = a.rows;
    let mut found: Vec<(Q, Subspace)> = Vec::new();
    let mut covered = 0;
    let mut tried: Vec<Q> = Vec::new();
    let mut try_value = |lam: &Q, found: &mut Vec<(Q, Subspace)>, covered: &mut usize| {
        if tried.contains(lam) {
            return;
        }
        tried.push(lam.clone());
        let shifted = a.sub(&Matrix::identity(n).scale(lam));
        let k = kernel(&shifted);
        if k.dim() > 0 {
            *covered += k.dim();
            let vs = k.vectors.iter().map(|c| combine(&s.vectors, c)).collect();
            found.push((lam.clone(), Subspace::new(s.ambient, vs)));
        }
    };
    for lam in candidates {
        try_value(lam, &mut found, &mut covered);
    }
    if covered < n {
        let poly = minimal_polynomial(&a);
        let roots = rational_roots(&poly);
        for lam in &roots {
            try_value(lam, &mut found, &mut covered);
        }
        if covered < n {
            let mut rest = poly;
            for r in &roots {
                rest = poly_div_linear(&rest, r);
            }
            let coeffs: Vec<String> = rest.iter().map(crate::rational::fmt_rational).collect();
            return Err(Error::NonSplitting(format!(
                "minimal polynomial factor with coefficients (low to high) [{}]",
                coeffs.join(", ")
            )));
        }
    }
    found.sort_by(|x, y| y.0.cmp(&x.0));
    Ok(found)
}

/// Monic minimal polynomial, coefficients from low to high degree.
pub fn minimal_polynomial(a: &Matrix) -> Vec<Q> {
    let n = a.rows;
    let flat = |m: &Matrix| -> Vec<Q> { m.data.iter().flatten().cloned().collect() };
    let mut powers: Vec<Vec<Q>> = vec![flat(&Matrix::identity(n))];
    let mut cur = Matrix::identity(n);
    for deg in 1..=n {
        cur = cur.mul(a);
        let target = flat(&cur);
        let basis = Matrix::from_cols(n * n, &powers);
        if let Some(c) = solve(&basis, &target) {
            let mut p: Vec<Q> = c.into_iter().map(|x| -x).collect();
            p.push(Q::one());
            debug_assert_eq!(p.len(), deg + 1);
            return p;
        }
        powers.push(target);
    }
    unreachable!("Cayley–Hamilton bounds the degree")
}

fn poly_eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn poly_div_linear(p: &[Q], r: &Q) -> Vec<Q> {
    // Synthetic division by (x - r); remainder must vanish.
    let n = p.len() - 1;
    let mut out = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..=n).rev() {
        let v = &p[i] + &carry * r;
        if i > 0 {
            out[i - 1] = v.clone();
        }
        carry = v;
    }
    out
}

fn poly_trim(mut p: Vec<Q>) -> Vec<Q> {
    if p.is_empty() {
        p.push(Q::zero());
    }
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = &r[dr] / &lead;
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r.pop();
        r = poly_trim(r);
    }
    poly_trim(r)
}

fn sturm_chain(p: &[Q]) -> Vec<Vec<Q>> {
    let deriv: Vec<Q> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * qb(BigInt::from(i)))
        .collect();
    let mut chain = vec![p.to_vec(), poly_trim(deriv)];
    loop {
        let n = chain.len();
        let last = &chain[n - 1];
        if last.len() == 1 {
            break;
        }
        let r = poly_rem(&chain[n - 2], last);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        chain.push(r.into_iter().map(|x| -x).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<Q>], x: &Q) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = poly_eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// All distinct rational roots of `p` (coefficients low to high).
pub fn rational_roots(p: &[Q]) -> Vec<Q> {
    let p = poly_trim(p.to_vec());
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    // Clear denominators, then substitute y = a_n x to get a monic integer
    // polynomial whose rational roots are integers.
    let den = common_denominator(p.iter());
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * qb(den.clone())).to_integer())
        .collect();
    let lead = ints[deg].clone();
    let monic: Vec<Q> = (0..=deg)
        .map(|i| {
            if i == deg {
                Q::one()
            } else {
                qb(&ints[i] * num_traits::pow(lead.clone(), deg - 1 - i))
            }
        })
        .collect();
    let bound = monic
        .iter()
        .take(deg)
        .map(|c| c.abs().to_integer())
        .max()
        .unwrap_or_default()
        + BigInt::one();
    let chain = sturm_chain(&monic);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone() - BigInt::one(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let (ql, qh) = (qb(lo.clone()), qb(hi.clone()));
        let count = sign_changes(&chain, &ql).saturating_sub(sign_changes(&chain, &qh));
        if count == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if poly_eval(&monic, &qh).is_zero() {
                roots.push(Q::new(hi, lead.clone()));
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi) / 2;
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots
}
