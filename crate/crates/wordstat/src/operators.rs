//! Word operators: shuffle insertion, deletion, the right action of the
//! symmetric group, letter replacement, lifting and random-to-random moves.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{qb, qi, Q};
use crate::words::{index_map, Combination, Composition, Word};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `u ⧢ v` with multiplicities.
pub fn shuffle_words(u: &[u8], v: &[u8]) -> Combination {
    let n = u.len() + v.len();
    let mut out = Combination::zero();
    for pos in subsets(n, v.len()) {
        let mut w = Vec::with_capacity(n);
        let (mut iu, mut iv) = (0, 0);
        for i in 0..n {
            if iv < pos.len() && pos[iv] == i {
                w.push(v[iv]);
                iv += 1;
            } else {
                w.push(u[iu]);
                iu += 1;
            }
        }
        out.add_term(w, Q::one());
    }
    out
}

/// `sha_v f`: shuffle `v` into every word of `f`.
pub fn shuffle_insert(v: &[u8], f: &Combination) -> Combination {
    f.map_words(|u| shuffle_words(u, v))
}

/// `∂_v f`: sum over all ways to delete an occurrence of `v` as a subsequence.
pub fn delete(v: &[u8], f: &Combination) -> Combination {
    f.map_words(|u| {
        let mut out = Combination::zero();
        for pos in subsets(u.len(), v.len()) {
            if pos.iter().zip(v).all(|(&i, &x)| u[i] == x) {
                let w: Word = (0..u.len())
                    .filter(|i| !pos.contains(i))
                    .map(|i| u[i])
                    .collect();
                out.add_term(w, Q::one());
            }
        }
        out
    })
}

/// A permutation of `{0..k-1}`, stored as its images: `self.0[i] = τ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm((0..k).collect())
    }

    /// Builds a permutation from 1-based cycles, e.g. `[[2,3,4,1]]`.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                if a == 0 || a > k || seen[a - 1] {
                    return Err(Error::OutOfRange(format!("cycle entry {a} for degree {k}")));
                }
                seen[a - 1] = true;
                img[a - 1] = cyc[(i + 1) % cyc.len()] - 1;
            }
        }
        Ok(Perm(img))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.0.len()];
        let mut sign = 1;
        for s in 0..self.0.len() {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// `(uτ)_i = u_{τ(i)}`.
    pub fn apply(&self, u: &[u8]) -> Word {
        self.0.iter().map(|&j| u[j]).collect()
    }

    /// The product `στ` under the right action: `u(στ) = (uσ)τ`.
    pub fn then(&self, tau: &Perm) -> Perm {
        Perm(tau.0.iter().map(|&j| self.0[j]).collect())
    }

    /// All permutations of degree `k`.
    pub fn all(k: usize) -> Vec<Perm> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
            if cur.len() == used.len() {
                out.push(Perm(cur.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; k], &mut out);
        out
    }
}

/// An element of the group algebra `ℚS_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    degree: usize,
    terms: BTreeMap<Perm, Q>,
}

impl GroupElement {
    pub fn zero(degree: usize) -> Self {
        GroupElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn perm(p: Perm) -> Self {
        let mut g = GroupElement::zero(p.degree());
        g.add_term(p, Q::one());
        g
    }

    pub fn add_term(&mut self, p: Perm, c: Q) {
        assert_eq!(p.degree(), self.degree, "permutation degree");
        let e = self.terms.entry(p.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &Q)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        let mut g = self.clone();
        for (p, c) in &other.terms {
            g.add_term(p.clone(), -c.clone());
        }
        g
    }
}

/// Right action `f·g`, extended bilinearly.
pub fn act(f: &Combination, g: &GroupElement) -> Result<Combination> {
    if let Some(k) = f.degree()? {
        if k != g.degree {
            return Err(Error::LengthMismatch(format!(
                "words of length {k} acted on by degree {}",
                g.degree
            )));
        }
    }
    Ok(f.map_words(|u| {
        let mut out = Combination::zero();
        for (p, c) in &g.terms {
            out.add_term(p.apply(u), c.clone());
        }
        out
    }))
}

/// `a_I`: the sum of all permutations fixing each (1-based) index in `I`.
pub fn averaging_element(fixed: &[usize], k: usize) -> Result<GroupElement> {
    if fixed.iter().any(|&i| i == 0 || i > k) {
        return Err(Error::OutOfRange(format!(
            "index set {fixed:?} for degree {k}"
        )));
    }
    let free: Vec<usize> = (0..k).filter(|i| !fixed.contains(&(i + 1))).collect();
    let mut g = GroupElement::zero(k);
    for p in Perm::all(free.len()) {
        let mut img: Vec<usize> = (0..k).collect();
        for (a, &b) in free.iter().zip(&p.0) {
            img[*a] = free[b];
        }
        g.add_term(Perm(img), Q::one());
    }
    Ok(g)
}

/// `f·a_I` computed without expanding `a_I`: the letters at free positions are
/// rearranged in every distinct way, each counted `Π m_x!` times.
pub fn act_averaging(f: &Combination, fixed: &[usize]) -> Result<Combination> {
    let Some(k) = f.degree()? else {
        return Ok(Combination::zero());
    };
    if fixed.iter().any(|&i| i == 0 || i > k) {
        return Err(Error::OutOfRange(format!(
            "index set {fixed:?} for degree {k}"
        )));
    }
    let free: Vec<usize> = (0..k).filter(|i| !fixed.contains(&(i + 1))).collect();
    Ok(f.map_words(|u| {
        let letters: Word = free.iter().map(|&i| u[i]).collect();
        let mut counts: BTreeMap<u8, u64> = BTreeMap::new();
        for &x in &letters {
            *counts.entry(x).or_default() += 1;
        }
        let mult = counts.values().fold(num_bigint::BigInt::one(), |acc, &m| {
            acc * crate::rational::factorial(m)
        });
        let mut out = Combination::zero();
        for arr in distinct_arrangements(&letters) {
            let mut w = u.to_vec();
            for (&i, &x) in free.iter().zip(&arr) {
                w[i] = x;
            }
            out.add_term(w, qb(mult.clone()));
        }
        out
    }))
}

/// All distinct orderings of a multiset of letters, lexicographically.
pub fn distinct_arrangements(letters: &[u8]) -> Vec<Word> {
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
    for &x in &sorted {
        *counts.entry(x).or_default() += 1;
    }
    let keys: Vec<u8> = counts.keys().copied().collect();
    let mut rem: Vec<usize> = counts.values().copied().collect();
    let mut out = Vec::new();
    fn rec(keys: &[u8], rem: &mut [usize], cur: &mut Word, n: usize, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..keys.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(keys[i]);
                rec(keys, rem, cur, n, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    rec(&keys, &mut rem, &mut Vec::new(), sorted.len(), &mut out);
    out
}

/// The word `α_λ = a^{λ_a} b^{λ_b} ⋯` for row lengths `lambda`.
pub fn alpha_word(lambda: &[usize]) -> Word {
    Composition::new(lambda.to_vec()).first_word()
}

/// `b_λ = Σ_{τ ∈ Q_λ} sign(τ) τ`, where `Q_λ` permutes, for each `j`, the
/// positions of the `j`-th occurrences of the letters in `α_λ`.
pub fn column_antisymmetrizer(lambda: &[usize]) -> GroupElement {
    let k: usize = lambda.iter().sum();
    let mut starts = Vec::new();
    let mut acc = 0;
    for &l in lambda {
        starts.push(acc);
        acc += l;
    }
    let width = lambda.iter().copied().max().unwrap_or(0);
    let columns: Vec<Vec<usize>> = (0..width)
        .map(|j| {
            lambda
                .iter()
                .zip(&starts)
                .filter(|(&l, _)| l > j)
                .map(|(_, &s)| s + j)
                .collect()
        })
        .collect();
    let mut elems = vec![(Perm::identity(k), 1i64)];
    for col in &columns {
        let mut next = Vec::new();
        for (base, s) in &elems {
            for p in Perm::all(col.len()) {
                let mut img = base.0.clone();
                for (a, &b) in col.iter().zip(&p.0) {
                    img[*a] = col[b];
                }
                next.push((Perm(img), s * p.sign()));
            }
        }
        elems = next;
    }
    let mut g = GroupElement::zero(k);
    for (p, s) in elems {
        g.add_term(p, qi(s));
    }
    g
}

/// A table of words `T = (t_x)_x`, one row per letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReplacementTable {
    pub rows: Vec<Word>,
}

impl ReplacementTable {
    pub fn new(rows: Vec<Word>) -> Self {
        ReplacementTable { rows }
    }

    /// The identity table `t_x = x^{κ_x}`.
    pub fn identity(kappa: &Composition) -> Self {
        ReplacementTable {
            rows: kappa
                .0
                .iter()
                .enumerate()
                .map(|(x, &c)| vec![x as u8; c])
                .collect(),
        }
    }

    /// `λ(T)_x = |t_x|`.
    pub fn shape(&self) -> Composition {
        Composition::new(self.rows.iter().map(Vec::len).collect())
    }

    /// `κ(T)_x = Σ_y #x(t_y)`.
    pub fn content(&self) -> Composition {
        let mut c = vec![0; self.rows.len()];
        for row in &self.rows {
            for &x in row {
                c[x as usize] += 1;
            }
        }
        Composition::new(c)
    }

    pub fn is_semistandard(&self) -> bool {
        if !self.shape().is_partition() || !self.content().is_partition() {
            return false;
        }
        if !self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1])) {
            return false;
        }
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width).all(|j| {
            let col: Vec<u8> = self
                .rows
                .iter()
                .filter(|r| r.len() > j)
                .map(|r| r[j])
                .collect();
            col.windows(2).all(|w| w[0] < w[1])
        })
    }

    pub fn display(&self, alphabet: &crate::words::Alphabet) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| alphabet.format_word(r))
            .collect();
        rows.join(";")
    }
}

/// `Θ[T] f`: each letter `x` of a word is replaced by the letters of `t_x`
/// in every distinct order; every resulting word is counted once.
pub fn replace(t: &ReplacementTable, f: &Combination) -> Result<Combination> {
    let d = t.rows.len();
    if let Some(c) = f.composition(d)? {
        if c != t.shape() {
            return Err(Error::CompositionMismatch(format!(
                "table shape {} but combination composition {c}",
                t.shape()
            )));
        }
    }
    let arrangements: Vec<Vec<Word>> = t.rows.iter().map(|r| distinct_arrangements(r)).collect();
    Ok(f.map_words(|u| {
        let positions: Vec<Vec<usize>> = (0..d)
            .map(|x| (0..u.len()).filter(|&i| u[i] as usize == x).collect())
            .collect();
        let mut words = vec![u.to_vec()];
        for x in 0..d {
            if positions[x].is_empty() {
                continue;
            }
            let mut next = Vec::with_capacity(words.len() * arrangements[x].len());
            for w in &words {
                for arr in &arrangements[x] {
                    let mut v = w.clone();
                    for (&i, &y) in positions[x].iter().zip(arr) {
                        v[i] = y;
                    }
                    next.push(v);
                }
            }
            words = next;
        }
        let mut out = Combination::zero();
        for w in words {
            out.add_term(w, Q::one());
        }
        out
    }))
}

/// `Θ_xy f`: replace one occurrence of `x` by `y`, summed over occurrences.
/// Words without `x` map to zero, and `Θ_xx` multiplies by the number of `x`s.
pub fn theta(x: u8, y: u8, f: &Combination) -> Combination {
    f.map_words(|u| {
        let mut out = Combination::zero();
        for i in 0..u.len() {
            if u[i] == x {
                let mut w = u.to_vec();
                w[i] = y;
                out.add_term(w, Q::one());
            }
        }
        out
    })
}

/// `Θ_xy^e f`.
pub fn theta_pow(x: u8, y: u8, e: usize, f: &Combination) -> Combination {
    (0..e).fold(f.clone(), |g, _| theta(x, y, &g))
}

/// `ℒ_b f = sha_b f − Θ_ab sha_a f / (k_a − k_b + 1)` on two letters `a = 0`,
/// `b = 1`.
pub fn lift_b(f: &Combination) -> Result<Combination> {
    let Some(c) = f.composition(2)? else {
        return Ok(Combination::zero());
    };
    let (ka, kb) = (c.0[0] as i64, c.0[1] as i64);
    if ka - kb + 1 == 0 {
        return Err(Error::OutOfRange(format!(
            "lift needs k_a − k_b + 1 ≠ 0, got ({ka},{kb})"
        )));
    }
    let denom = qi(ka - kb + 1);
    let first = shuffle_insert(&[1], f);
    let second = theta(0, 1, &shuffle_insert(&[0], f));
    Ok(first.sub(&second.scale(&(Q::one() / denom))))
}

/// `sha_a`, the other lifting operator.
pub fn lift_a(f: &Combination) -> Combination {
    shuffle_insert(&[0], f)
}

/// `ℛ = Σ_x sha_x ∂_x` over the first `d` letters.
pub fn random_to_random(f: &Combination, d: usize) -> Combination {
    let mut out = Combination::zero();
    for x in 0..d as u8 {
        out = out.add(&shuffle_insert(&[x], &delete(&[x], f)));
    }
    out
}

/// Matrix of a linear word operator between two word bases; column `j` is
/// the image of `domain[j]`.
pub fn matrix_of(
    op: impl Fn(&Combination) -> Combination,
    domain: &[Word],
    codomain: &[Word],
) -> Result<Matrix> {
    let idx = index_map(codomain);
    let cols: Result<Vec<Vec<Q>>> = domain
        .iter()
        .map(|w| op(&Combination::word(w.clone())).to_vector(&idx, codomain.len()))
        .collect();
    Ok(Matrix::from_cols(codomain.len(), &cols?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn parse(a: &Alphabet, s: &str) -> Combination {
        Combination::parse(a, s).unwrap()
    }

    #[test]
    fn shuffle_and_delete_examples() {
        let ab = Alphabet::new("ab").unwrap();
        let w = |s: &str| ab.parse_word(s).unwrap();
        assert_eq!(
            shuffle_insert(&w("b"), &parse(&ab, "aa")),
            parse(&ab, "aab + aba + baa")
        );
        assert_eq!(
            shuffle_insert(&w("ab"), &parse(&ab, "a")),
            parse(&ab, "2*aab + aba")
        );
        assert_eq!(
            delete(&w("a"), &parse(&ab, "aaba")),
            parse(&ab, "2*aba + aab")
        );
        assert!(delete(&w("ab"), &parse(&ab, "bbaa")).is_zero());
        let f = parse(&ab, "ab - 3*ba");
        assert_eq!(shuffle_insert(&[], &f), f);
        assert_eq!(delete(&[], &f), f);
    }

    #[test]
    fn group_action_examples() {
        let abc = Alphabet::new("abc").unwrap();
        let f = parse(&abc, "aabc + 8*cbaa");
        let c = Perm::from_cycles(4, &[&[2, 3, 4, 1]]).unwrap();
        let g = GroupElement::perm(Perm::identity(4)).sub(&GroupElement::perm(c));
        assert_eq!(
            act(&f, &g).unwrap(),
            parse(&abc, "aabc + 8*cbaa - abca - 8*baac")
        );
        assert_eq!(act(&f, &GroupElement::perm(Perm::identity(4))).unwrap(), f);
        assert!(act(&f, &GroupElement::perm(Perm::identity(3))).is_err());

        let ab = Alphabet::new("ab").unwrap();
        let h = parse(&ab, "aaaab");
        let a12 = averaging_element(&[1, 2], 5).unwrap();
        assert_eq!(a12.len(), 6);
        let expect = parse(&ab, "2*aaaab + 2*aaaba + 2*aabaa");
        assert_eq!(act(&h, &a12).unwrap(), expect);
        assert_eq!(act_averaging(&h, &[1, 2]).unwrap(), expect);
        assert_eq!(averaging_element(&[1, 2, 3], 3).unwrap().len(), 1);
        assert_eq!(averaging_element(&[], 3).unwrap().len(), 6);
    }

    #[test]
    fn specht_generator_example() {
        let ab = Alphabet::new("ab").unwrap();
        let b = column_antisymmetrizer(&[3, 2]);
        assert_eq!(b.len(), 4);
        let gen = act(&Combination::word(alpha_word(&[3, 2])), &b).unwrap();
        assert_eq!(gen, parse(&ab, "aaabb - ababa - baaab + bbaaa"));
    }

    #[test]
    fn replacement_examples() {
        let abc = Alphabet::new("abc").unwrap();
        let w = |s: &str| abc.parse_word(s).unwrap();
        let t = ReplacementTable::new(vec![w("aab"), w("bc"), w("c")]);
        assert_eq!(t.shape(), Composition::new(vec![3, 2, 1]));
        assert_eq!(t.content(), Composition::new(vec![2, 2, 2]));
        let out = replace(&t, &parse(&abc, "cbbaaa")).unwrap();
        assert_eq!(
            out,
            parse(&abc, "cbcaab + cbcaba + cbcbaa + ccbaab + ccbaba + ccbbaa")
        );
        let id = ReplacementTable::identity(&Composition::new(vec![2, 1, 1]));
        let f = parse(&abc, "abca - 2*cbaa");
        assert_eq!(replace(&id, &f).unwrap(), f);
        assert!(replace(&t, &f).is_err());

        let sab = Alphabet::new("sab").unwrap();
        let (a, b) = (1, 2);
        assert_eq!(
            theta(a, b, &parse(&sab, "sababa")),
            parse(&sab, "sbbaba + sabbba + sababb")
        );
        assert!(theta(a, b, &parse(&sab, "bb")).is_zero());
        assert_eq!(theta(a, a, &parse(&sab, "sababa")), parse(&sab, "3*sababa"));
    }

    #[test]
    fn semistandard_flags() {
        let abc = Alphabet::new("abc").unwrap();
        let w = |s: &str| abc.parse_word(s).unwrap();
        assert!(ReplacementTable::new(vec![w("aa"), w("bc"), vec![]]).is_semistandard());
        assert!(!ReplacementTable::new(vec![w("ab"), w("ac"), vec![]]).is_semistandard());
        assert!(!ReplacementTable::new(vec![w("ba"), w("c"), vec![]]).is_semistandard());
    }

    #[test]
    fn lifting_and_random_to_random() {
        let ab = Alphabet::new("ab").unwrap();
        // ℒ_b a = (ab + ba) − ½ Θ_ab (2aa) = 0.
        assert!(lift_b(&parse(&ab, "a")).unwrap().is_zero());
        let l = lift_b(&parse(&ab, "ab - ba")).unwrap();
        assert!(theta(1, 0, &l).is_zero());
        assert!(lift_b(&parse(&ab, "abb")).is_err());
        assert_eq!(
            random_to_random(&parse(&ab, "aab"), 2),
            parse(&ab, "5*aab + 3*aba + baa")
        );
        assert_eq!(random_to_random(&parse(&ab, "a"), 2), parse(&ab, "a"));
        let m = matrix_of(|f| delete(&[0], f), &[vec![0, 1], vec![1, 0]], &[vec![1]]).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[1, 1]]));
    }
}
