use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use wordstat::{Combination, Word};

/// Counts every pattern of several combinations in one pass over a text.
///
/// Patterns share a prefix trie. Reading letter `x` adds each node's parent
/// count to every node whose last letter is `x`, deepest first, so a node's
/// count is the number of occurrences of its prefix so far.
#[derive(Debug, Clone)]
pub struct PatternCounter {
    /// `(node, parent)` pairs per letter, deepest nodes first.
    updates: Vec<Vec<(usize, usize)>>,
    nodes: usize,
    /// Per combination: `(node, coefficient)`.
    weights: Vec<Vec<(usize, f64)>>,
}

impl PatternCounter {
    /// Builds a counter over `d` letters. Node 0 is the empty prefix.
    pub fn new(combinations: &[Combination], d: usize) -> Self {
        let mut ids: BTreeMap<Word, usize> = BTreeMap::new();
        ids.insert(Vec::new(), 0);
        let mut by_letter: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); d];
        let mut weights = Vec::with_capacity(combinations.len());
        for f in combinations {
            let mut ws = Vec::new();
            for (u, c) in f.terms() {
                let mut parent = 0;
                for len in 1..=u.len() {
                    let prefix = &u[..len];
                    let next = ids.len();
                    let id = *ids.entry(prefix.to_vec()).or_insert(next);
                    if id == next {
                        by_letter[prefix[len - 1] as usize].push((len, id, parent));
                    }
                    parent = id;
                }
                ws.push((parent, c.to_f64().unwrap_or(f64::NAN)));
            }
            weights.push(ws);
        }
        let updates = by_letter
            .into_iter()
            .map(|mut v| {
                v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                v.into_iter().map(|(_, id, parent)| (id, parent)).collect()
            })
            .collect();
        PatternCounter {
            updates,
            nodes: ids.len(),
            weights,
        }
    }

    /// `#f(w)` for each combination, in floating point.
    pub fn evaluate(&self, w: &[u8]) -> Vec<f64> {
        let mut counts = vec![0u128; self.nodes];
        counts[0] = 1;
        for &x in w {
            for &(id, parent) in &self.updates[x as usize] {
                counts[id] += counts[parent];
            }
        }
        self.weights
            .iter()
            .map(|ws| ws.iter().map(|&(id, c)| c * counts[id] as f64).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wordstat::words::{count_combination, Alphabet};

    #[test]
    fn agrees_with_exact_counts() {
        let a = Alphabet::new("abc").unwrap();
        let fs = vec![
            Combination::parse(&a, "cba + bac + acb - abc - bca - cab").unwrap(),
            Combination::parse(&a, "1/2*ab - ba + 3*bb").unwrap(),
            Combination::parse(&a, "aa - cc").unwrap(),
        ];
        let counter = PatternCounter::new(&fs, 3);
        let w = a.parse_word("abcabbcacbaacbcab").unwrap();
        let got = counter.evaluate(&w);
        for (f, g) in fs.iter().zip(got) {
            let exact = count_combination(f, &w).to_f64().unwrap();
            assert_eq!(g, exact);
        }
    }
}
