//! Alphabets, incidence matrices, admissible words, and the finite
//! irreducibility / primitivity checks.
//!
//! Edges are referred to by index into the alphabet's edge list; all word
//! enumeration is lexicographic in that order, so outputs are reproducible
//! across runs and thread counts.

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::fmt;

/// Directed multigraph data: edge names plus initial/terminal vertex of each
/// edge. A single-vertex alphabet models a plain IFS.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    /// vertex index the edge maps *into* (its image vertex)
    pub initial: Vec<usize>,
    /// vertex index the edge is defined *on* (its domain vertex)
    pub terminal: Vec<usize>,
}

impl Alphabet {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<String>,
        initial: Vec<usize>,
        terminal: Vec<usize>,
    ) -> Result<Self> {
        if edges.len() != initial.len() || edges.len() != terminal.len() {
            return Err(Error::InvalidParameter(
                "edge/vertex map length mismatch".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if !seen.insert(e.clone()) {
                return Err(Error::InvalidParameter(format!("duplicate edge id `{e}`")));
            }
        }
        for (&i, &t) in initial.iter().zip(&terminal) {
            if i >= vertices.len() || t >= vertices.len() {
                return Err(Error::UnknownVertex(format!("index {}", i.max(t))));
            }
        }
        Ok(Self {
            vertices,
            edges,
            initial,
            terminal,
        })
    }

    /// Single-vertex alphabet over `names`.
    pub fn ifs(names: Vec<String>) -> Self {
        let n = names.len();
        Self {
            vertices: vec!["v".to_string()],
            edges: names,
            initial: vec![0; n],
            terminal: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_index(&self, name: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }
}

/// Boolean incidence matrix on edge pairs. `entry(e, f)` says the two-letter
/// word `ef` is admissible, which requires t(e) = i(f) so that φ_e ∘ φ_f
/// composes.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl IncidenceMatrix {
    pub fn new(alphabet: &Alphabet, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = alphabet.len();
        let mut bits = vec![false; n * n];
        for &(e, f) in pairs {
            if e >= n || f >= n {
                return Err(Error::UnknownEdge(format!("index {}", e.max(f))));
            }
            if alphabet.terminal[e] != alphabet.initial[f] {
                return Err(Error::IncidenceMismatch {
                    e: alphabet.edges[e].clone(),
                    f: alphabet.edges[f].clone(),
                });
            }
            bits[e * n + f] = true;
        }
        Ok(Self { n, bits })
    }

    /// Maximal matrix: every composable pair admissible. For a single-vertex
    /// alphabet this is the all-ones matrix of an IFS.
    pub fn maximal(alphabet: &Alphabet) -> Self {
        let n = alphabet.len();
        let mut bits = vec![false; n * n];
        for e in 0..n {
            for f in 0..n {
                bits[e * n + f] = alphabet.terminal[e] == alphabet.initial[f];
            }
        }
        Self { n, bits }
    }

    pub fn entry(&self, e: usize, f: usize) -> bool {
        self.bits[e * self.n + f]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Boolean matrix product.
    fn bool_mul(&self, other: &IncidenceMatrix) -> IncidenceMatrix {
        let n = self.n;
        let mut bits = vec![false; n * n];
        for e in 0..n {
            for k in 0..n {
                if self.bits[e * n + k] {
                    for f in 0..n {
                        bits[e * n + f] |= other.bits[k * n + f];
                    }
                }
            }
        }
        IncidenceMatrix { n, bits }
    }

    fn all_positive(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }
}

/// Admissible finite word, stored as edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<usize>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: vec![] }
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Pairwise admissibility under `matrix`; reports the first bad pair.
    pub fn check_admissible(&self, matrix: &IncidenceMatrix, alphabet: &Alphabet) -> Result<()> {
        for (j, w) in self.letters.windows(2).enumerate() {
            if !matrix.entry(w[0], w[1]) {
                return Err(Error::InadmissibleWord {
                    index: j,
                    left: alphabet.edges[w[0]].clone(),
                    right: alphabet.edges[w[1]].clone(),
                });
            }
        }
        Ok(())
    }

    pub fn initial_vertex(&self, alphabet: &Alphabet) -> Option<usize> {
        self.letters.first().map(|&e| alphabet.initial[e])
    }

    pub fn terminal_vertex(&self, alphabet: &Alphabet) -> Option<usize> {
        self.letters.last().map(|&e| alphabet.terminal[e])
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        self.letters
            .iter()
            .map(|&e| alphabet.edges[e].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.letters
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(".")
        )
    }
}

/// Default cap on word enumeration, matching the CLI's desk-scale budget.
pub const DEFAULT_ENUMERATION_CAP: u64 = 40_000_000;

/// Number of admissible words of length `n` (exact, via integer matrix
/// powers of the incidence pattern).
pub fn word_count(matrix: &IncidenceMatrix, n: usize) -> u128 {
    let m = matrix.size() as u128;
    match n {
        0 => 1,
        1 => m,
        _ => {
            // row counts of A^(n-1) summed
            let size = matrix.size();
            let mut counts = vec![1u128; size];
            for _ in 0..n - 1 {
                let mut next = vec![0u128; size];
                for e in 0..size {
                    let mut acc = 0u128;
                    for f in 0..size {
                        if matrix.entry(e, f) {
                            acc += counts[f];
                        }
                    }
                    next[e] = acc;
                }
                counts = next;
            }
            counts.iter().sum()
        }
    }
}

/// Exactly E_A^n in lexicographic order of letter indices. `n = 0` yields the
/// single empty word.
pub fn admissible_words(
    matrix: &IncidenceMatrix,
    alphabet: &Alphabet,
    n: usize,
    cap: u64,
) -> Result<Vec<Word>> {
    if n == 0 {
        return Ok(vec![Word::empty()]);
    }
    let bound = (alphabet.len() as u128).pow(n as u32);
    if bound > cap as u128 {
        return Err(Error::EnumerationTooLarge {
            requested: bound,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(n);
    fn rec(
        matrix: &IncidenceMatrix,
        m: usize,
        n: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) {
        if stack.len() == n {
            out.push(Word::new(stack.clone()));
            return;
        }
        for f in 0..m {
            if let Some(&e) = stack.last() {
                if !matrix.entry(e, f) {
                    continue;
                }
            }
            stack.push(f);
            rec(matrix, m, n, stack, out);
            stack.pop();
        }
    }
    rec(matrix, alphabet.len(), n, &mut stack, &mut out);
    Ok(out)
}

/// Witness for finite irreducibility: one connecting word per ordered edge
/// pair, each of length ≤ |E|.
#[derive(Debug, Clone)]
pub struct IrreducibilityWitness {
    /// connectors[(e, f)] = ω with eωf admissible; the empty word when the
    /// pair is directly admissible
    pub connectors: Vec<((usize, usize), Word)>,
}

impl IrreducibilityWitness {
    /// The distinct connecting words, i.e. the finite set Ω itself.
    pub fn omega(&self) -> Vec<Word> {
        let mut ws: Vec<Word> = self.connectors.iter().map(|(_, w)| w.clone()).collect();
        ws.sort();
        ws.dedup();
        ws
    }
}

/// True iff every ordered pair (e, f) admits a finite connecting word.
/// Equivalent graph criterion: in the digraph with arcs e → f when
/// A_{ef} = 1, every ordered pair is connectable by a path.
pub fn is_finitely_irreducible(
    matrix: &IncidenceMatrix,
    alphabet: &Alphabet,
) -> (bool, Option<IrreducibilityWitness>) {
    let n = alphabet.len();
    let mut connectors = Vec::with_capacity(n * n);
    for e in 0..n {
        // BFS over the arc digraph from e; parent pointers give the word
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for g in 0..n {
            if matrix.entry(e, g) && !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
        while let Some(g) = queue.pop_front() {
            for h in 0..n {
                if matrix.entry(g, h) && !seen[h] {
                    seen[h] = true;
                    parent[h] = Some(g);
                    queue.push_back(h);
                }
            }
        }
        for f in 0..n {
            if !seen[f] {
                return (false, None);
            }
            // reconstruct the path e -> ... -> f; the connector is everything
            // strictly between e and f
            let mut path = vec![f];
            let mut cur = f;
            while let Some(p) = parent[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            path.pop(); // drop f itself; what remains is ω
            connectors.push(((e, f), Word::new(path)));
        }
    }
    (true, Some(IrreducibilityWitness { connectors }))
}

/// True iff some boolean power A^m is all-positive; returns the smallest
/// such m. The search is capped at |E|² + 1 (Wielandt-type bound), which
/// keeps the check total.
pub fn is_finitely_primitive(
    matrix: &IncidenceMatrix,
    alphabet: &Alphabet,
) -> (bool, Option<usize>) {
    let cap = alphabet.len() * alphabet.len() + 1;
    let mut power = matrix.clone();
    for m in 1..=cap {
        if power.all_positive() {
            return (true, Some(m));
        }
        power = power.bool_mul(matrix);
    }
    (false, None)
}

/// Infinite admissible symbol sequence consumed prefix by prefix.
///
/// The generator is pulled on demand and every emitted prefix is checked for
/// admissibility, so downstream code can trust cached letters.
pub struct SymbolStream<'a> {
    matrix: &'a IncidenceMatrix,
    alphabet: &'a Alphabet,
    source: Box<dyn FnMut(usize) -> usize + 'a>,
    cache: Vec<usize>,
}

impl<'a> SymbolStream<'a> {
    /// Periodic repetition of `pattern`.
    pub fn periodic(
        matrix: &'a IncidenceMatrix,
        alphabet: &'a Alphabet,
        pattern: Vec<usize>,
    ) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyWord);
        }
        for &l in &pattern {
            if l >= alphabet.len() {
                return Err(Error::UnknownEdge(format!("index {l}")));
            }
        }
        let p = pattern.clone();
        Ok(Self {
            matrix,
            alphabet,
            source: Box::new(move |i| p[i % p.len()]),
            cache: Vec::new(),
        })
    }

    /// Arbitrary generator; `f(i)` must return the i-th letter.
    pub fn from_fn(
        matrix: &'a IncidenceMatrix,
        alphabet: &'a Alphabet,
        f: impl FnMut(usize) -> usize + 'a,
    ) -> Self {
        Self {
            matrix,
            alphabet,
            source: Box::new(f),
            cache: Vec::new(),
        }
    }

    /// The admissible prefix ω|_n; fails on the first inadmissible pair the
    /// generator produces.
    pub fn prefix(&mut self, n: usize) -> Result<Word> {
        while self.cache.len() < n {
            let i = self.cache.len();
            let l = (self.source)(i);
            if l >= self.alphabet.len() {
                return Err(Error::UnknownEdge(format!("index {l}")));
            }
            if let Some(&prev) = self.cache.last() {
                if !self.matrix.entry(prev, l) {
                    return Err(Error::InadmissibleWord {
                        index: i - 1,
                        left: self.alphabet.edges[prev].clone(),
                        right: self.alphabet.edges[l].clone(),
                    });
                }
            }
            self.cache.push(l);
        }
        Ok(Word::new(self.cache[..n].to_vec()))
    }
}
