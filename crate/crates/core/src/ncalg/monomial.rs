use std::cmp::Ordering;
use std::fmt;

/// The generator `u_{row,col}` (1-based indices).
///
/// The derived order is row-major: `u11 < u12 < ... < u1n < u21 < ... < unn`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub row: u8,
    pub col: u8,
}

impl GeneratorId {
    pub const fn new(row: usize, col: usize) -> Self {
        GeneratorId { row: row as u8, col: col as u8 }
    }

    pub fn row(self) -> usize {
        self.row as usize
    }

    pub fn col(self) -> usize {
        self.col as usize
    }

    pub fn in_rank(self, n: usize) -> bool {
        (1..=n).contains(&self.row()) && (1..=n).contains(&self.col())
    }

    /// Zero-based row-major position among the `n^2` generators.
    pub fn index(self, n: usize) -> usize {
        (self.row() - 1) * n + (self.col() - 1)
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        Self::new(idx / n + 1, idx % n + 1)
    }

    /// All `n^2` generators in row-major order.
    pub fn all(n: usize) -> impl Iterator<Item = GeneratorId> {
        (0..n * n).map(move |k| Self::from_index(k, n))
    }
}

impl fmt::Debug for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}{}", self.row, self.col)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u[{},{}]", self.row, self.col)
    }
}

/// A word in the generators. Ordered degree-first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NcMonomial {
    word: Vec<GeneratorId>,
}

impl NcMonomial {
    pub fn one() -> Self {
        NcMonomial { word: Vec::new() }
    }

    pub fn new(word: Vec<GeneratorId>) -> Self {
        NcMonomial { word }
    }

    pub fn gen(g: GeneratorId) -> Self {
        NcMonomial { word: vec![g] }
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        NcMonomial { word: pairs.iter().map(|&(i, j)| GeneratorId::new(i, j)).collect() }
    }

    pub fn word(&self) -> &[GeneratorId] {
        &self.word
    }

    pub fn into_word(self) -> Vec<GeneratorId> {
        self.word
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn is_one(&self) -> bool {
        self.word.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut word = Vec::with_capacity(self.word.len() + other.word.len());
        word.extend_from_slice(&self.word);
        word.extend_from_slice(&other.word);
        NcMonomial { word }
    }

    pub fn reversed(&self) -> Self {
        NcMonomial { word: self.word.iter().rev().copied().collect() }
    }

    /// Non-decreasing words are the PBW monomials of the quantum matrix
    /// algebra under the row-major order.
    pub fn is_sorted(&self) -> bool {
        self.word.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn pairs(&self) -> Vec<[usize; 2]> {
        self.word.iter().map(|g| [g.row(), g.col()]).collect()
    }
}

impl Ord for NcMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for NcMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        // Runs of one generator print as powers.
        let mut first = true;
        let mut k = 0;
        while k < self.word.len() {
            let g = self.word[k];
            let run = self.word[k..].iter().take_while(|&&h| h == g).count();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{run}")?;
            }
            k += run;
        }
        Ok(())
    }
}
