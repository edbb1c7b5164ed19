use std::collections::HashMap;
use std::hash::Hash;

/// Number of order-`order` n-grams in a sequence of `len` tokens.
pub fn ngram_total(len: usize, order: usize) -> usize {
    assert!(order >= 1, "n-gram order starts at 1");
    (len + 1).saturating_sub(order)
}

/// Multiset of the n-grams of one order, borrowing from the token slice.
#[derive(Debug, Clone)]
pub struct NGramProfile<'a, T> {
    order: usize,
    counts: HashMap<&'a [T], usize>,
    total: usize,
}

impl<'a, T: Eq + Hash> NGramProfile<'a, T> {
    pub fn new(tokens: &'a [T], order: usize) -> Self {
        let total = ngram_total(tokens.len(), order);
        let mut counts = HashMap::with_capacity(total);
        if total > 0 {
            for gram in tokens.windows(order) {
                *counts.entry(gram).or_insert(0) += 1;
            }
        }
        Self { order, counts, total }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn count(&self, gram: &[T]) -> usize {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Clipped overlap: sum over n-grams of `min(self count, other count)`.
    pub fn overlap(&self, other: &NGramProfile<'_, T>) -> usize {
        let (small, large) = if self.counts.len() <= other.counts.len() { (self, other) } else { (other, self) };
        small
            .counts
            .iter()
            .map(|(g, &c)| c.min(large.count(g)))
            .sum()
    }

    /// Keeps, per n-gram, the larger of the two counts. Used to build the
    /// clipping ceiling over several references.
    pub fn max_merge(&mut self, other: &NGramProfile<'a, T>) {
        debug_assert_eq!(self.order, other.order);
        for (g, &c) in &other.counts {
            let e = self.counts.entry(*g).or_insert(0);
            *e = (*e).max(c);
        }
        self.total = self.total.max(other.total);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [T], usize)> + '_ {
        self.counts.iter().map(|(g, &c)| (*g, c))
    }
}
