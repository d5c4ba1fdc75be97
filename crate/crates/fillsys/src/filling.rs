//! Classification of chord diagrams as filling systems.
//!
//! Traverse the points with `omega` (clockwise successor) and `tau` (chord
//! partner); the orbits of `tau . omega` are the boundary cycles of the
//! surface obtained by thickening the diagram. With `n` chords and `b`
//! boundary cycles the genus is `g = (n + 1 - b) / 2`. A diagram is a
//! k-filling system of genus g when `n = 2g + k`, there are exactly `k+1`
//! boundary cycles, and none of them has length 1 or 2 (a length-1 or -2
//! cycle means a chord parallel to the boundary circle or to another
//! chord).

use crate::diagram::ChordWord;
use crate::error::{Error, Result};

/// Orbit data of `tau . omega` for one diagram.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryProfile {
    orbits: Vec<usize>, // sorted ascending
    n: usize,
}

impl BoundaryProfile {
    /// Multiset of boundary-cycle lengths, ascending.
    pub fn orbit_lengths(&self) -> &[usize] {
        &self.orbits
    }

    /// Number of boundary cycles.
    pub fn b(&self) -> usize {
        self.orbits.len()
    }

    pub fn min_orbit_length(&self) -> usize {
        self.orbits[0]
    }

    /// Genus of the thickened surface, `(n + 1 - b) / 2`; `None` when that
    /// is not a nonnegative integer.
    pub fn genus(&self) -> Option<usize> {
        let b = self.b();
        if b <= self.n + 1 && (self.n + 1 - b).is_multiple_of(2) {
            Some((self.n + 1 - b) / 2)
        } else {
            None
        }
    }

    /// Index `k = b - 1`.
    pub fn k(&self) -> usize {
        self.b() - 1
    }
}

/// Boundary-cycle profile of `w`.
pub fn boundary_profile(w: &ChordWord) -> BoundaryProfile {
    let matching = w.matching();
    let mut orbits = orbit_lengths(matching.partners());
    orbits.sort_unstable();
    BoundaryProfile {
        orbits,
        n: w.n(),
    }
}

/// Boundary-cycle lengths of a bare matching, ascending.
pub fn matching_orbit_lengths(m: &crate::diagram::Matching) -> Vec<usize> {
    let mut orbits = orbit_lengths(m.partners());
    orbits.sort_unstable();
    orbits
}

/// Orbit lengths of `p -> partner[(p+1) mod len]`, unsorted. Works on the
/// raw partner array so the enumeration inner loop can call it without
/// building a word.
pub(crate) fn orbit_lengths(partner: &[usize]) -> Vec<usize> {
    let len = partner.len();
    let mut seen = vec![false; len];
    let mut orbits = Vec::new();
    for start in 0..len {
        if seen[start] {
            continue;
        }
        let mut p = start;
        let mut length = 0;
        while !seen[p] {
            seen[p] = true;
            length += 1;
            p = partner[(p + 1) % len];
        }
        orbits.push(length);
    }
    orbits
}

/// Single pass over the partner array answering "exactly `b` orbits, all of
/// length >= 3?" with early exit; the hot path of enumeration.
pub(crate) fn has_filling_orbits(partner: &[usize], b: usize) -> bool {
    let len = partner.len();
    debug_assert!(len <= 64);
    let mut seen = 0u64;
    let mut orbits = 0;
    for start in 0..len {
        if seen >> start & 1 != 0 {
            continue;
        }
        orbits += 1;
        if orbits > b {
            return false;
        }
        let mut p = start;
        let mut length = 0usize;
        while seen >> p & 1 == 0 {
            seen |= 1 << p;
            length += 1;
            p = partner[(p + 1) % len];
        }
        if length < 3 {
            return false;
        }
    }
    orbits == b
}

/// A chord word validated as a filling system, with its genus and index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FillingSystem {
    word: ChordWord,
    genus: usize,
    k: usize,
    profile: BoundaryProfile,
}

impl FillingSystem {
    /// Classifies `word`; errors unless it is a k-filling system of some
    /// genus (no boundary cycle of length 1 or 2).
    pub fn new(word: ChordWord) -> Result<Self> {
        let profile = boundary_profile(&word);
        if profile.min_orbit_length() < 3 {
            return Err(Error::MalformedDiagram(format!(
                "not a filling system: boundary cycle of length {} in {word}",
                profile.min_orbit_length()
            )));
        }
        let genus = profile.genus().ok_or_else(|| {
            Error::InternalConsistency(format!("boundary parity violated for {word}"))
        })?;
        let k = profile.k();
        Ok(FillingSystem {
            word,
            genus,
            k,
            profile,
        })
    }

    /// As [`FillingSystem::new`], but also requires the stated `(g, k)`.
    pub fn with_type(word: ChordWord, g: usize, k: usize) -> Result<Self> {
        let fs = FillingSystem::new(word)?;
        if fs.genus != g || fs.k != k {
            return Err(Error::MalformedDiagram(format!(
                "expected a {k}-filling system of genus {g}, found (g, k) = ({}, {})",
                fs.genus, fs.k
            )));
        }
        Ok(fs)
    }

    pub fn word(&self) -> &ChordWord {
        &self.word
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.word.n()
    }

    pub fn profile(&self) -> &BoundaryProfile {
        &self.profile
    }
}

/// True iff `w` is a k-filling system of genus `g`.
pub fn is_filling_system(w: &ChordWord, g: usize, k: usize) -> bool {
    if w.n() != 2 * g + k {
        return false;
    }
    let profile = boundary_profile(w);
    profile.b() == k + 1 && profile.min_orbit_length() >= 3
}

/// True iff the crossing graph of `w` is disconnected; the union of the
/// straight chords falls apart exactly when no interleaving path joins
/// them.
pub fn is_disconnected(w: &ChordWord) -> bool {
    !w.crossing_graph().is_connected()
}

/// One term of a boundary sum: the diagram with chord `i` deleted, or zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ChainTerm {
    Zero,
    Term {
        word: ChordWord,
        /// `(-1)^(i-1)` for the deleted position `i`.
        sign: i8,
    },
}

/// Deletes chord `i` (1-based) from `u`. Returns [`ChainTerm::Zero`] unless
/// the remnant is a `(k-1)`-filling system of the same genus; the remaining
/// chords keep their relative order.
pub fn delete_chord(u: &FillingSystem, i: usize) -> Result<ChainTerm> {
    let n = u.n();
    if i == 0 || i > n {
        return Err(Error::ChordOutOfRange { index: i, n });
    }
    let sign = if i % 2 == 1 { 1 } else { -1 };
    if n == 1 {
        // the empty diagram is not a filling system
        return Ok(ChainTerm::Zero);
    }
    let label = i as u16;
    let mut remnant = Vec::with_capacity(2 * n - 2);
    for &x in u.word().labels() {
        if x == label {
            continue;
        }
        remnant.push(if x > label { x - 1 } else { x });
    }
    let word = ChordWord::new(remnant)
        .map_err(|e| Error::InternalConsistency(format!("deletion produced {e}")))?;
    let profile = boundary_profile(&word);
    // same genus means the boundary count drops by exactly one
    if profile.b() + 1 == u.profile().b() && profile.min_orbit_length() >= 3 {
        Ok(ChainTerm::Term { word, sign })
    } else {
        Ok(ChainTerm::Zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(labels: &[u16]) -> ChordWord {
        ChordWord::new(labels.to_vec()).unwrap()
    }

    #[test]
    fn profile_of_crossing_pair() {
        let p = boundary_profile(&word(&[1, 2, 1, 2]));
        assert_eq!(p.orbit_lengths(), &[4]);
        assert_eq!(p.b(), 1);
        assert_eq!(p.genus(), Some(1));
    }

    #[test]
    fn profile_of_nested_pairs() {
        let p = boundary_profile(&word(&[1, 1, 2, 2]));
        assert_eq!(p.orbit_lengths(), &[1, 1, 2]);
        assert_eq!(p.b(), 3);
        assert_eq!(p.genus(), Some(0));
    }

    #[test]
    fn profile_of_genus_two_path() {
        let p = boundary_profile(&word(&[1, 2, 1, 3, 2, 4, 3, 4]));
        assert_eq!(p.orbit_lengths(), &[8]);
        assert_eq!(p.b(), 1);
        assert_eq!(p.genus(), Some(2));
    }

    #[test]
    fn profile_of_triangle() {
        let p = boundary_profile(&word(&[1, 2, 3, 1, 2, 3]));
        assert_eq!(p.orbit_lengths(), &[3, 3]);
        assert_eq!(p.b(), 2);
        assert_eq!(p.genus(), Some(1));
    }

    #[test]
    fn filling_predicate_examples() {
        assert!(is_filling_system(&word(&[1, 2, 1, 3, 2, 4, 3, 4]), 2, 0));
        // orbit of length 2
        assert!(!is_filling_system(&word(&[1, 2, 1, 3, 2, 3]), 1, 1));
        // chord parallel to the boundary: orbit of length 1
        assert!(!is_filling_system(&word(&[1, 1]), 0, 1));
        // wrong (g, k) for a valid word
        assert!(!is_filling_system(&word(&[1, 2, 1, 2]), 2, 0));
    }

    #[test]
    fn filling_predicate_is_rotation_and_reorder_invariant() {
        let w = word(&[1, 2, 1, 3, 2, 4, 3, 4]);
        for r in 0..8 {
            assert!(is_filling_system(&w.rotate(r), 2, 0));
        }
        let (p, _) = w.apply_permutation(&[3, 1, 4, 2]).unwrap();
        assert!(is_filling_system(&p, 2, 0));
    }

    #[test]
    fn disconnected_examples() {
        assert!(is_disconnected(&word(&[1, 2, 1, 2, 3, 4, 3, 4])));
        assert!(!is_disconnected(&word(&[1, 2, 1, 3, 2, 4, 3, 4])));
        assert!(!is_disconnected(&word(&[1, 2, 1, 2])));
        assert!(!is_disconnected(&word(&[1, 1])));
    }

    #[test]
    fn delete_chord_from_path_five() {
        // the 5-chord path pattern, a 1-filling system of genus 2
        let y = FillingSystem::with_type(word(&[1, 2, 1, 3, 2, 4, 3, 5, 4, 5]), 2, 1).unwrap();
        match delete_chord(&y, 1).unwrap() {
            ChainTerm::Term { word: w, sign } => {
                assert_eq!(w.labels(), &[1, 2, 1, 3, 2, 4, 3, 4]);
                assert_eq!(sign, 1);
            }
            ChainTerm::Zero => panic!("deleting chord 1 must survive"),
        }
        // chord 1 becomes parallel to the boundary
        assert_eq!(delete_chord(&y, 2).unwrap(), ChainTerm::Zero);
        assert!(delete_chord(&y, 6).is_err());
        assert!(delete_chord(&y, 0).is_err());
    }

    #[test]
    fn delete_chord_from_crossing_pair_is_zero() {
        let u = FillingSystem::with_type(word(&[1, 2, 1, 2]), 1, 0).unwrap();
        assert_eq!(delete_chord(&u, 1).unwrap(), ChainTerm::Zero);
        assert_eq!(delete_chord(&u, 2).unwrap(), ChainTerm::Zero);
    }

    #[test]
    fn filling_system_classification() {
        let fs = FillingSystem::new(word(&[1, 2, 1, 3, 2, 4, 3, 4])).unwrap();
        assert_eq!(fs.genus(), 2);
        assert_eq!(fs.k(), 0);
        assert!(FillingSystem::new(word(&[1, 1])).is_err());
        assert!(FillingSystem::with_type(word(&[1, 2, 1, 2]), 2, 0).is_err());
    }

    #[test]
    fn euler_parity_on_small_words() {
        // b == n + 1 (mod 2) for every diagram
        for labels in [
            vec![1, 1],
            vec![1, 2, 1, 2],
            vec![1, 1, 2, 2],
            vec![1, 2, 2, 1],
            vec![1, 2, 3, 1, 2, 3],
            vec![1, 2, 1, 3, 2, 3],
        ] {
            let w = ChordWord::new(labels).unwrap();
            let p = boundary_profile(&w);
            assert_eq!(p.b() % 2, (w.n() + 1) % 2, "{w}");
            assert!(p.genus().is_some(), "{w}");
        }
    }

    #[test]
    fn deletion_changes_boundary_count_by_one() {
        let y = FillingSystem::new(word(&[1, 2, 1, 3, 2, 4, 3, 5, 4, 5])).unwrap();
        let b = y.profile().b();
        for i in 1..=y.n() {
            let label = i as u16;
            let mut remnant = Vec::new();
            for &x in y.word().labels() {
                if x == label {
                    continue;
                }
                remnant.push(if x > label { x - 1 } else { x });
            }
            let w = ChordWord::new(remnant).unwrap();
            let db = boundary_profile(&w).b() as i64 - b as i64;
            assert_eq!(db.abs(), 1, "chord {i}");
        }
    }
}
