//! Alphabets, words, compositions, subsequence counting and rational
//! combinations of words.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, fmt_rational, parse_rational, qb, Q};

/// A word stored as letter indices into an [`Alphabet`].
pub type Word = Vec<u8>;

/// An ordered set of distinct letters. Letter order fixes the lexicographic
/// order of words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self> {
        let letters: Vec<char> = letters.chars().collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if letters.len() > u8::MAX as usize {
            return Err(Error::Unsupported("more than 255 letters".into()));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::DuplicateLetter(*c));
            }
        }
        Ok(Alphabet { letters })
    }

    /// The digit alphabet `1 2 … d` used for words over a D basis.
    pub fn digits(d: usize) -> Self {
        let s: String = (1..=d)
            .map(|i| std::char::from_digit(i as u32, 36).unwrap_or('?'))
            .collect();
        Alphabet::new(&s).expect("distinct digits")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, i: u8) -> char {
        self.letters[i as usize]
    }

    pub fn index(&self, c: char) -> Option<u8> {
        self.letters.iter().position(|&x| x == c).map(|i| i as u8)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| self.index(c).ok_or(Error::UnknownLetter(c)))
            .collect()
    }

    pub fn format_word(&self, w: &[u8]) -> String {
        w.iter().map(|&i| self.letter(i)).collect()
    }

    /// The alphabet with one extra letter appended.
    pub fn extended(&self, c: char) -> Result<Self> {
        let mut s: String = self.letters.iter().collect();
        s.push(c);
        Alphabet::new(&s)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters.iter().collect();
        f.write_str(&s)
    }
}

/// Letter counts, indexed by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn new(counts: Vec<usize>) -> Self {
        Composition(counts)
    }

    pub fn of_word(w: &[u8], d: usize) -> Self {
        let mut c = vec![0; d];
        for &x in w {
            c[x as usize] += 1;
        }
        Composition(c)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weakly decreasing in letter order.
    pub fn is_partition(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &Composition) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The multinomial coefficient `|κ|! / Π κ_x!`.
    pub fn multinomial(&self) -> BigInt {
        let mut acc = BigInt::one();
        let mut n = 0u64;
        for &c in &self.0 {
            n += c as u64;
            acc *= binomial(n, c as u64);
        }
        acc
    }

    /// The lexicographically smallest word with this composition.
    pub fn first_word(&self) -> Word {
        let mut w = Vec::with_capacity(self.total());
        for (x, &c) in self.0.iter().enumerate() {
            w.extend(std::iter::repeat_n(x as u8, c));
        }
        w
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of occurrences of `u` as a subsequence of `w`.
///
/// Prefix dynamic program in `O(|u|·|w|)`. Panics on `u128` overflow, which
/// needs binomials beyond `2^128`.
pub fn count_subword(u: &[u8], w: &[u8]) -> u128 {
    let k = u.len();
    if k > w.len() {
        return 0;
    }
    // dp[j] = occurrences of u[..j] in the prefix read so far.
    let mut dp = vec![0u128; k + 1];
    dp[0] = 1;
    for &c in w {
        for j in (0..k).rev() {
            if u[j] == c {
                dp[j + 1] = dp[j + 1]
                    .checked_add(dp[j])
                    .expect("subword count overflow");
            }
        }
    }
    dp[k]
}

/// Counts `pattern` in `text`, both given as strings over `alphabet`.
pub fn count_str(alphabet: &Alphabet, pattern: &str, text: &str) -> Result<u128> {
    let u = alphabet.parse_word(pattern)?;
    let w = alphabet.parse_word(text)?;
    Ok(count_subword(&u, &w))
}

/// All words of length `k` over `d` letters, in lexicographic order.
pub fn enumerate_words(d: usize, k: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * d);
        for w in &out {
            for x in 0..d {
                let mut v = w.clone();
                v.push(x as u8);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All words with composition `kappa`, in lexicographic order.
pub fn enumerate_by_composition(kappa: &Composition) -> Vec<Word> {
    fn rec(rem: &mut Vec<usize>, cur: &mut Word, out: &mut Vec<Word>, left: usize) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in 0..rem.len() {
            if rem[x] > 0 {
                rem[x] -= 1;
                cur.push(x as u8);
                rec(rem, cur, out, left - 1);
                cur.pop();
                rem[x] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut rem = kappa.0.clone();
    rec(&mut rem, &mut Vec::new(), &mut out, kappa.total());
    out
}

/// Index of each word in a basis list.
pub fn index_map(basis: &[Word]) -> BTreeMap<Word, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect()
}

/// A finite formal sum `Σ f_u · u` with nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Combination {
    terms: BTreeMap<Word, Q>,
}

impl Combination {
    pub fn zero() -> Self {
        Combination::default()
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, Q::one())
    }

    pub fn term(w: Word, c: Q) -> Self {
        let mut f = Combination::zero();
        f.add_term(w, c);
        f
    }

    /// Builds a combination, rejecting words of differing lengths.
    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Q)>) -> Result<Self> {
        let mut f = Combination::zero();
        for (w, c) in terms {
            f.add_term(w, c);
        }
        f.degree()?;
        Ok(f)
    }

    pub fn from_vector(basis: &[Word], v: &[Q]) -> Self {
        let mut f = Combination::zero();
        for (w, c) in basis.iter().zip(v) {
            f.add_term(w.clone(), c.clone());
        }
        f
    }

    pub fn to_vector(&self, index: &BTreeMap<Word, usize>, dim: usize) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); dim];
        for (w, c) in &self.terms {
            let i = index.get(w).ok_or_else(|| {
                Error::CompositionMismatch("word outside the target space".into())
            })?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &[u8]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Common word length; `None` for the zero combination.
    pub fn degree(&self) -> Result<Option<usize>> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.any(|w| w.len() != first.len()) {
            return Err(Error::NotHomogeneous("words of different lengths".into()));
        }
        Ok(Some(first.len()))
    }

    /// Common composition over `d` letters; `None` for the zero combination.
    pub fn composition(&self, d: usize) -> Result<Option<Composition>> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        let c = Composition::of_word(first, d);
        if it.any(|w| Composition::of_word(w, d) != c) {
            return Err(Error::NotHomogeneous(
                "words of different compositions".into(),
            ));
        }
        Ok(Some(c))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Combination::zero();
        }
        Combination {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &Combination) -> Self {
        let mut f = self.clone();
        for (w, c) in &other.terms {
            f.add_term(w.clone(), c.clone());
        }
        f
    }

    pub fn sub(&self, other: &Combination) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// Standard inner product `Σ f_u g_u`.
    pub fn dot(&self, other: &Combination) -> Q {
        let (a, b) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        a.terms
            .iter()
            .filter_map(|(w, c)| b.terms.get(w).map(|d| c * d))
            .fold(Q::zero(), |acc, x| acc + x)
    }

    /// Applies a linear map defined on single words.
    pub fn map_words(&self, mut op: impl FnMut(&[u8]) -> Combination) -> Combination {
        let mut out = Combination::zero();
        for (w, c) in &self.terms {
            for (v, d) in op(w).terms {
                out.add_term(v, d * c);
            }
        }
        out
    }

    /// Parses text such as `"1/2*ba - 1/2*ab"` or `"HT - TH"`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let mut f = Combination::zero();
        let cleaned = text.replace('−', "-");
        let mut tokens: Vec<(bool, String)> = Vec::new();
        let mut sign = true;
        let mut cur = String::new();
        for ch in cleaned.chars() {
            match ch {
                '+' | '-' => {
                    if !cur.trim().is_empty() {
                        tokens.push((sign, cur.trim().to_string()));
                        cur.clear();
                        sign = true;
                    }
                    if ch == '-' {
                        sign = !sign;
                    }
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            tokens.push((sign, cur.trim().to_string()));
        } else if tokens.is_empty() && cleaned.trim() != "0" && !cleaned.trim().is_empty() {
            return Err(Error::Parse(format!("empty term in {text:?}")));
        }
        for (positive, tok) in tokens {
            if tok == "0" {
                continue;
            }
            let (coef, word) = match tok.split_once('*') {
                Some((c, w)) => (parse_rational(c)?, w.trim().to_string()),
                None => (Q::one(), tok.clone()),
            };
            if word.is_empty() || word.contains(char::is_whitespace) {
                return Err(Error::Parse(format!("bad term {tok:?}")));
            }
            let w = alphabet.parse_word(&word)?;
            f.add_term(w, if positive { coef } else { -coef });
        }
        f.degree()?;
        Ok(f)
    }

    /// Formats as `"1/2*ba - 1/2*ab"`; the zero combination prints as `0`.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = if w.is_empty() {
                "()".to_string()
            } else {
                alphabet.format_word(w)
            };
            let mag = c.abs();
            let body = if mag.is_one() {
                word
            } else {
                format!("{}*{}", fmt_rational(&mag), word)
            };
            match (i, c.is_negative()) {
                (0, false) => s.push_str(&body),
                (0, true) => {
                    s.push('-');
                    s.push_str(&body)
                }
                (_, false) => {
                    s.push_str(" + ");
                    s.push_str(&body)
                }
                (_, true) => {
                    s.push_str(" - ");
                    s.push_str(&body)
                }
            }
        }
        s
    }
}

/// `#f(w) = Σ_u f_u · #u(w)`.
pub fn count_combination(f: &Combination, w: &[u8]) -> Q {
    f.terms()
        .map(|(u, c)| c * qb(BigInt::from(count_subword(u, w))))
        .fold(Q::zero(), |acc, x| acc + x)
}

/// `#f(w) / C(n, k)`.
pub fn normalize_one_sample(f: &Combination, w: &[u8]) -> Result<Q> {
    let Some(k) = f.degree()? else {
        return Ok(Q::zero());
    };
    if w.len() < k {
        return Err(Error::TooShort(format!(
            "text length {} < pattern length {k}",
            w.len()
        )));
    }
    Ok(count_combination(f, w) / qb(binomial(w.len() as u64, k as u64)))
}

/// `#f(w) / Π_x C(n_x, k_x)` over `d` letters.
pub fn normalize_multi(f: &Combination, w: &[u8], d: usize) -> Result<Q> {
    let Some(kappa) = f.composition(d)? else {
        return Ok(Q::zero());
    };
    let n = Composition::of_word(w, d);
    if !kappa.le(&n) {
        return Err(Error::TooShort(format!(
            "text composition {n} is not ≥ {kappa}"
        )));
    }
    let denom = kappa
        .0
        .iter()
        .zip(&n.0)
        .fold(BigInt::one(), |acc, (&k, &m)| {
            acc * binomial(m as u64, k as u64)
        });
    Ok(count_combination(f, w) / qb(denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn brute(u: &[u8], w: &[u8]) -> u128 {
        let n = w.len();
        let k = u.len();
        let mut total = 0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let sub: Vec<u8> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| w[i])
                .collect();
            if sub == u {
                total += 1;
            }
        }
        total
    }

    #[test]
    fn referee() {
        let a = Alphabet::new("efr").unwrap();
        assert_eq!(count_str(&a, "fee", "referee").unwrap(), 3);
        assert_eq!(count_str(&a, "referee", "referee").unwrap(), 1);
        assert!(count_str(&a, "fee", "refuse").is_err());
    }

    #[test]
    fn dp_matches_enumeration() {
        let ab = Alphabet::new("ab").unwrap();
        let w = ab.parse_word("aabb").unwrap();
        assert_eq!(count_subword(&ab.parse_word("ab").unwrap(), &w), 4);
        for n in 0..=8 {
            for w in enumerate_words(2, n) {
                for k in 0..=3 {
                    for u in enumerate_words(2, k) {
                        assert_eq!(count_subword(&u, &w), brute(&u, &w));
                    }
                }
            }
        }
    }

    #[test]
    fn combination_counts() {
        let ht = Alphabet::new("HT").unwrap();
        let f = Combination::parse(&ht, "HT - TH").unwrap();
        let w = ht.parse_word("HHTT").unwrap();
        assert_eq!(count_combination(&f, &w), qi(4));
        assert_eq!(count_combination(&Combination::zero(), &w), qi(0));
        let full = Combination::parse(&ht, "H + T").unwrap();
        assert_eq!(count_combination(&full, &w), qi(4));
        assert_eq!(normalize_one_sample(&full, &w).unwrap(), qi(1));
    }

    #[test]
    fn normalizations() {
        let ab = Alphabet::new("ab").unwrap();
        let f = Combination::parse(&ab, "ab").unwrap();
        assert_eq!(
            normalize_one_sample(&f, &ab.parse_word("aabb").unwrap()).unwrap(),
            q(2, 3)
        );
        let g = Combination::parse(&ab, "ba").unwrap();
        assert_eq!(
            normalize_multi(&g, &ab.parse_word("ba").unwrap(), 2).unwrap(),
            qi(1)
        );
        assert!(normalize_one_sample(&f, &ab.parse_word("a").unwrap()).is_err());
        assert!(normalize_multi(&f, &ab.parse_word("aa").unwrap(), 2).is_err());
    }

    #[test]
    fn enumeration_orders() {
        let ab = Alphabet::new("ab").unwrap();
        let ws: Vec<String> = enumerate_words(2, 2)
            .iter()
            .map(|w| ab.format_word(w))
            .collect();
        assert_eq!(ws, ["aa", "ab", "ba", "bb"]);
        let ws: Vec<String> = enumerate_by_composition(&Composition::new(vec![2, 1]))
            .iter()
            .map(|w| ab.format_word(w))
            .collect();
        assert_eq!(ws, ["aab", "aba", "baa"]);
        assert_eq!(
            enumerate_by_composition(&Composition::new(vec![1, 1, 1, 1])).len(),
            24
        );
        assert_eq!(
            Composition::new(vec![2, 1, 1]).multinomial(),
            BigInt::from(12)
        );
    }

    #[test]
    fn parse_display_round_trip() {
        let ab = Alphabet::new("ab").unwrap();
        let f = Combination::parse(&ab, "1/2*ba - 1/2*ab").unwrap();
        assert_eq!(f.display(&ab), "-1/2*ab + 1/2*ba");
        assert_eq!(Combination::parse(&ab, &f.display(&ab)).unwrap(), f);
        assert!(Combination::parse(&ab, "ab + a").is_err());
        assert!(Combination::parse(&ab, "ac").is_err());
        assert!(Combination::parse(&ab, "0").unwrap().is_zero());
        assert_eq!(
            Combination::parse(&ab, "ab - ab").unwrap(),
            Combination::zero()
        );
    }
}
