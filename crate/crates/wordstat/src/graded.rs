//! Labeled decompositions of a combination into components.

use crate::rational::Q;
use crate::words::Combination;

/// One labeled component, e.g. `(r)`, `(r, m)` or `(r, i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPart {
    pub label: Vec<usize>,
    pub part: Combination,
}

/// An ordered list of labeled components whose sum is the decomposed input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedDecomposition {
    pub parts: Vec<GradedPart>,
}

impl GradedDecomposition {
    pub fn push(&mut self, label: Vec<usize>, part: Combination) {
        self.parts.push(GradedPart { label, part });
    }

    pub fn get(&self, label: &[usize]) -> Option<&Combination> {
        self.parts
            .iter()
            .find(|p| p.label == label)
            .map(|p| &p.part)
    }

    /// Components with a nonzero part.
    pub fn nonzero(&self) -> impl Iterator<Item = &GradedPart> {
        self.parts.iter().filter(|p| !p.part.is_zero())
    }

    pub fn total(&self) -> Combination {
        self.parts
            .iter()
            .fold(Combination::zero(), |acc, p| acc.add(&p.part))
    }

    /// Labels of the nonzero components.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.nonzero().map(|p| p.label.clone()).collect()
    }
}

/// A component of a space decomposition, with its dimension and the
/// eigenvalue or variance constant attached to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceComponent {
    pub label: Vec<usize>,
    pub dim: usize,
    pub value: Option<Q>,
}
