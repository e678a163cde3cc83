use std::fmt;
use std::ops::Range;

/// A word `a_n ... a_1`; `letters[0]` is the leftmost letter (highest tensor slot).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `e_a ⊗ e_w`.
    pub fn prepend(&self, a: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// The word with the letter at position `p` (counted from the left) deleted.
    pub fn without(&self, p: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(p);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Letter `a_k` in right-to-left numbering, `1 <= k <= n`.
    pub fn alpha(&self, k: usize) -> usize {
        self.0[self.0.len() - k]
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "Ω");
        }
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Lexicographic word indexing for levels `0..=n_max` over `d` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelIndex {
    pub d: usize,
    pub n_max: usize,
    offsets: Vec<usize>,
}

impl LevelIndex {
    pub fn new(d: usize, n_max: usize) -> Self {
        let mut offsets = vec![0];
        let mut dim = 1usize;
        for _ in 0..=n_max {
            let last = *offsets.last().unwrap();
            offsets.push(last + dim);
            dim = dim.saturating_mul(d);
        }
        LevelIndex { d, n_max, offsets }
    }

    /// Dimension of level `n`, i.e. `d^n`.
    pub fn dim(&self, n: usize) -> usize {
        self.offsets[n + 1] - self.offsets[n]
    }

    pub fn total_dim(&self) -> usize {
        self.offsets[self.n_max + 1]
    }

    /// Global indices of level `n`.
    pub fn range(&self, n: usize) -> Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Global indices of all levels `<= n`.
    pub fn range_upto(&self, n: usize) -> Range<usize> {
        0..self.offsets[n.min(self.n_max) + 1]
    }

    pub fn index(&self, w: &Word) -> usize {
        self.offsets[w.level()] + self.local_index(w.letters())
    }

    pub fn local_index(&self, letters: &[usize]) -> usize {
        letters.iter().fold(0, |acc, &a| acc * self.d + a)
    }

    pub fn level_of(&self, global: usize) -> usize {
        match self.offsets.binary_search(&global) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    pub fn word(&self, global: usize) -> Word {
        let n = self.level_of(global);
        self.word_at(n, global - self.offsets[n])
    }

    pub fn word_at(&self, n: usize, mut local: usize) -> Word {
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = local % self.d;
            local /= self.d;
        }
        Word(letters)
    }

    /// All words of level `n` in lexicographic order.
    pub fn words(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        (0..self.dim(n)).map(move |i| self.word_at(n, i))
    }
}
