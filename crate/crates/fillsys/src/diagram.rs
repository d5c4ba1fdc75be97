//! Ordered chord diagrams on a circle.
//!
//! A diagram with `n` chords is stored as a circular word of length `2n`
//! over the labels `1..=n`, each label appearing exactly twice: position
//! `p` carries the label of the chord whose endpoint sits at point `p`,
//! with points `0..2n-1` in clockwise order. The chord order of the
//! diagram is the label order. Two words describe the same unordered
//! picture when they differ by a rotation of the circle; reordering the
//! chords by a permutation carries the sign of that permutation.

use std::fmt;

use crate::error::{Error, Result};

/// Chord label, 1-based.
pub type Label = u16;

/// Circular word of `2n` chord labels; see the module docs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordWord {
    word: Vec<Label>,
}

impl ChordWord {
    /// Validates that `word` has even positive length `2n` and that each
    /// label in `1..=n` occurs exactly twice.
    pub fn new(word: Vec<Label>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::MalformedDiagram("empty word".into()));
        }
        if !word.len().is_multiple_of(2) {
            return Err(Error::MalformedDiagram(format!(
                "odd word length {}",
                word.len()
            )));
        }
        let n = word.len() / 2;
        let mut seen = vec![0u8; n + 1];
        for &x in &word {
            if x == 0 || x as usize > n {
                return Err(Error::MalformedDiagram(format!(
                    "label {x} outside 1..={n}"
                )));
            }
            seen[x as usize] += 1;
        }
        for (label, &count) in seen.iter().enumerate().skip(1) {
            if count != 2 {
                return Err(Error::MalformedDiagram(format!(
                    "label {label} occurs {count} times, expected 2"
                )));
            }
        }
        Ok(ChordWord { word })
    }

    /// Builds a word from `n` unordered point pairs; pair `i` (0-based)
    /// becomes chord `i+1`. The pairs must partition `0..2n-1`.
    pub fn from_chords(chords: &[(usize, usize)]) -> Result<Self> {
        let n = chords.len();
        if n == 0 {
            return Err(Error::MalformedDiagram("no chords".into()));
        }
        let mut word = vec![0 as Label; 2 * n];
        for (i, &(a, b)) in chords.iter().enumerate() {
            if a == b {
                return Err(Error::MalformedDiagram(format!(
                    "chord {} has equal endpoints {a}",
                    i + 1
                )));
            }
            for p in [a, b] {
                if p >= 2 * n {
                    return Err(Error::MalformedDiagram(format!(
                        "point {p} outside 0..={}",
                        2 * n - 1
                    )));
                }
                if word[p] != 0 {
                    return Err(Error::MalformedDiagram(format!("point {p} repeated")));
                }
                word[p] = (i + 1) as Label;
            }
        }
        // full coverage is implied: 2n slots, 2n writes, no repeats
        ChordWord::new(word)
    }

    /// Parses the text form `1 2 1 2` (space-separated labels).
    pub fn parse(text: &str) -> Result<Self> {
        let labels = text
            .split_whitespace()
            .map(|t| {
                t.parse::<Label>()
                    .map_err(|_| Error::Parse(format!("bad label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ChordWord::new(labels)
    }

    pub fn n(&self) -> usize {
        self.word.len() / 2
    }

    pub fn point_count(&self) -> usize {
        self.word.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.word
    }

    /// The involution pairing the two endpoints of each chord.
    pub fn matching(&self) -> Matching {
        let len = self.word.len();
        let mut first = vec![usize::MAX; self.n() + 1];
        let mut partner = vec![0usize; len];
        for (p, &x) in self.word.iter().enumerate() {
            let x = x as usize;
            if first[x] == usize::MAX {
                first[x] = p;
            } else {
                partner[p] = first[x];
                partner[first[x]] = p;
            }
        }
        Matching { partner }
    }

    /// Endpoints of chord `label` as `(smaller point, larger point)`.
    pub fn chord_endpoints(&self, label: Label) -> (usize, usize) {
        let mut it = self
            .word
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == label)
            .map(|(p, _)| p);
        let a = it.next().expect("label present");
        let b = it.next().expect("label occurs twice");
        (a, b)
    }

    /// Rotates the circle clockwise by `r` steps (point `p` moves to
    /// `p+r`), then relabels chords by first occurrence so the result is
    /// again a valid word.
    pub fn rotate(&self, r: usize) -> ChordWord {
        let len = self.word.len();
        let r = r % len;
        let mut rotated = vec![0 as Label; len];
        for (p, slot) in rotated.iter_mut().enumerate() {
            *slot = self.word[(p + len - r) % len];
        }
        let (word, _) = first_occurrence_relabel(&rotated);
        ChordWord { word }
    }

    /// Reorders chords by `sigma` (1-based images: chord `i` of the result
    /// is chord `sigma[i-1]` of the input) and returns the sign of `sigma`.
    pub fn apply_permutation(&self, sigma: &[Label]) -> Result<(ChordWord, i8)> {
        let n = self.n();
        if sigma.len() != n {
            return Err(Error::MalformedPermutation(format!(
                "length {} != n = {n}",
                sigma.len()
            )));
        }
        let mut inverse = vec![0 as Label; n + 1];
        for (i, &image) in sigma.iter().enumerate() {
            if image == 0 || image as usize > n {
                return Err(Error::MalformedPermutation(format!(
                    "image {image} outside 1..={n}"
                )));
            }
            if inverse[image as usize] != 0 {
                return Err(Error::MalformedPermutation(format!(
                    "image {image} repeated"
                )));
            }
            inverse[image as usize] = (i + 1) as Label;
        }
        let word = self.word.iter().map(|&x| inverse[x as usize]).collect();
        Ok((ChordWord { word }, permutation_parity(sigma)))
    }

    /// Canonical representative of the rotation class, with the sign that
    /// relates this word to it: as chain elements, `self = sign * class`.
    /// Torsion classes (some rotational symmetry reorders the chords by an
    /// odd permutation, forcing `2u = 0`) always come back with sign `+1`.
    pub fn canonicalize(&self) -> (CanonicalClass, i8) {
        let mut scratch = CanonScratch::new(self.point_count());
        let (word, torsion, sign) = canonical_form(&self.word, &mut scratch);
        (
            CanonicalClass {
                word: ChordWord { word },
                torsion,
            },
            sign,
        )
    }

    /// Graph on the chords `1..=n` with an edge wherever two chords
    /// interleave around the circle (equivalently, where the straight
    /// segments cross inside the disk).
    pub fn crossing_graph(&self) -> CrossingGraph {
        let n = self.n();
        let mut ends = vec![(usize::MAX, usize::MAX); n + 1];
        for (p, &x) in self.word.iter().enumerate() {
            let e = &mut ends[x as usize];
            if e.0 == usize::MAX {
                e.0 = p;
            } else {
                e.1 = p;
            }
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for i in 1..=n {
            let (a, b) = ends[i];
            for j in i + 1..=n {
                let (c, d) = ends[j];
                // exactly one of j's endpoints strictly inside the arc (a, b)
                if (a < c && c < b) != (a < d && d < b) {
                    adjacency[i].push(j as Label);
                    adjacency[j].push(i as Label);
                }
            }
        }
        CrossingGraph { n, adjacency }
    }
}

impl fmt::Display for ChordWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChordWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Fixed-point-free involution on the points `0..2n-1`; `partner[p]` is
/// the other endpoint of the chord through `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<usize>,
}

impl Matching {
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        if partner.is_empty() || !partner.len().is_multiple_of(2) {
            return Err(Error::MalformedDiagram(format!(
                "matching size {} not even and positive",
                partner.len()
            )));
        }
        for (p, &q) in partner.iter().enumerate() {
            if q >= partner.len() || q == p || partner[q] != p {
                return Err(Error::MalformedDiagram(format!(
                    "partner array is not a fixed-point-free involution at {p}"
                )));
            }
        }
        Ok(Matching { partner })
    }

    pub fn size(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Word with chords labeled in first-occurrence order.
    pub fn word(&self) -> ChordWord {
        ChordWord {
            word: word_from_partner(&self.partner),
        }
    }
}

/// Rotation-canonical representative of a diagram class, as produced by
/// [`ChordWord::canonicalize`].
#[derive(Clone, PartialEq, Eq)]
pub struct CanonicalClass {
    word: ChordWord,
    torsion: bool,
}

impl CanonicalClass {
    /// Trusted constructor for callers that already canonicalized.
    pub(crate) fn from_parts(word: ChordWord, torsion: bool) -> Self {
        CanonicalClass { word, torsion }
    }

    pub fn word(&self) -> &ChordWord {
        &self.word
    }

    /// True when the class has order 2 in the chain group.
    pub fn torsion(&self) -> bool {
        self.torsion
    }

    pub fn into_word(self) -> ChordWord {
        self.word
    }
}

impl fmt::Debug for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.word, if self.torsion { " [2]" } else { "" })
    }
}

/// Symmetric loop-free adjacency over the chords `1..=n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossingGraph {
    n: usize,
    adjacency: Vec<Vec<Label>>, // index 0 unused
}

impl CrossingGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, chord: Label) -> &[Label] {
        &self.adjacency[chord as usize]
    }

    pub fn degree(&self, chord: Label) -> usize {
        self.adjacency[chord as usize].len()
    }

    pub fn are_adjacent(&self, i: Label, j: Label) -> bool {
        self.adjacency[i as usize].contains(&j)
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for &j in &self.adjacency[i] {
                if (i as Label) < j {
                    out.push((i as Label, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1 as Label];
        seen[1] = true;
        let mut count = 0;
        while let Some(c) = stack.pop() {
            count += 1;
            for &d in &self.adjacency[c as usize] {
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    stack.push(d);
                }
            }
        }
        count == self.n
    }
}

/// Relabels by order of first occurrence; returns the new word and the
/// relabeling `rho` (`rho[old-1] = new`, 1-based labels).
pub(crate) fn first_occurrence_relabel(seq: &[Label]) -> (Vec<Label>, Vec<Label>) {
    let n = seq.len() / 2;
    let mut rho = vec![0 as Label; n];
    let mut next = 1 as Label;
    let mut out = Vec::with_capacity(seq.len());
    for &x in seq {
        let slot = &mut rho[x as usize - 1];
        if *slot == 0 {
            *slot = next;
            next += 1;
        }
        out.push(*slot);
    }
    (out, rho)
}

/// Sign of a permutation given as 1-based images (`perm[i-1]` is the image
/// of `i`): `+1` even, `-1` odd.
pub(crate) fn permutation_parity(perm: &[Label]) -> i8 {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    let mut sign = 1i8;
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            len += 1;
            c = perm[c - 1] as usize;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    sign
}

pub(crate) fn word_from_partner(partner: &[usize]) -> Vec<Label> {
    let mut label_of = vec![0 as Label; partner.len()];
    let mut next = 1 as Label;
    let mut word = Vec::with_capacity(partner.len());
    for (p, &q) in partner.iter().enumerate() {
        let key = p.min(q);
        if label_of[key] == 0 {
            label_of[key] = next;
            next += 1;
        }
        word.push(label_of[key]);
    }
    word
}

/// Reusable buffers for [`canonical_form`]; one per worker thread keeps the
/// enumeration inner loop allocation-free.
pub(crate) struct CanonScratch {
    rotated: Vec<Label>,
    candidate: Vec<Label>,
    rho: Vec<Label>,
    minimizers: Vec<usize>,
}

impl CanonScratch {
    pub(crate) fn new(point_count: usize) -> Self {
        CanonScratch {
            rotated: vec![0; point_count],
            candidate: vec![0; point_count],
            rho: vec![0; point_count / 2],
            minimizers: Vec::with_capacity(point_count),
        }
    }
}

/// Core of canonicalization: lexicographic minimum over all rotations of
/// the first-occurrence relabeling. Returns `(canonical word, torsion,
/// sign)` where `input = sign * canonical` as chain elements.
pub(crate) fn canonical_form(
    word: &[Label],
    scratch: &mut CanonScratch,
) -> (Vec<Label>, bool, i8) {
    let len = word.len();
    debug_assert!(len >= 2 && len.is_multiple_of(2));
    let n = len / 2;
    let mut best: Option<Vec<Label>> = None;
    scratch.minimizers.clear();

    for r in 0..len {
        // rotated[p] = word[(p - r) mod len], relabeled on the fly
        let rho = &mut scratch.rho;
        rho[..n].fill(0);
        let mut next = 1 as Label;
        let candidate = &mut scratch.candidate;
        let mut verdict = match &best {
            None => std::cmp::Ordering::Less,
            Some(_) => std::cmp::Ordering::Equal,
        };
        for p in 0..len {
            let old = word[(p + len - r) % len] as usize - 1;
            if rho[old] == 0 {
                rho[old] = next;
                next += 1;
            }
            candidate[p] = rho[old];
            if verdict == std::cmp::Ordering::Equal {
                verdict = candidate[p].cmp(&best.as_ref().unwrap()[p]);
                if verdict == std::cmp::Ordering::Greater {
                    break;
                }
            }
        }
        match verdict {
            std::cmp::Ordering::Greater => {}
            std::cmp::Ordering::Equal => scratch.minimizers.push(r),
            std::cmp::Ordering::Less => {
                match &mut best {
                    Some(b) => b.copy_from_slice(candidate),
                    None => best = Some(candidate.clone()),
                }
                scratch.minimizers.clear();
                scratch.minimizers.push(r);
            }
        }
    }

    let best = best.expect("at least one rotation");
    let mut even_seen = false;
    let mut odd_seen = false;
    let mut first_sign = 1i8;
    for (idx, &r) in scratch.minimizers.iter().enumerate() {
        for p in 0..len {
            scratch.rotated[p] = word[(p + len - r) % len];
        }
        let (_, rho) = first_occurrence_relabel(&scratch.rotated);
        let sign = permutation_parity(&rho);
        if idx == 0 {
            first_sign = sign;
        }
        if sign > 0 {
            even_seen = true;
        } else {
            odd_seen = true;
        }
        if even_seen && odd_seen {
            break;
        }
    }
    let torsion = even_seen && odd_seen;
    (best, torsion, if torsion { 1 } else { first_sign })
}
