//! Exhaustive enumeration of filling-system bases.
//!
//! Strategy: walk every perfect matching on `2n` points (always extending
//! the smallest unmatched point), keep the ones whose boundary cycles fit
//! the requested `(g, k)`, canonicalize, and dedup. Work is split across
//! workers by the partner of point 0 (independent subtrees); the merged,
//! sorted result is identical for any worker count.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::diagram::{canonical_form, word_from_partner, CanonScratch, CanonicalClass, ChordWord, Label};
use crate::error::{Error, Result};
use crate::filling::{has_filling_orbits, is_filling_system};

const CACHE_HEADER: &str = "# fillsys basis v1";

/// Enumeration size guard. The matching space on `2n` points has
/// `(2n-1)!!` elements; anything past 20 points needs an explicit
/// override.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    max_points: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_points: 20 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_points: usize::MAX,
        }
    }

    pub fn check(&self, point_count: usize) -> Result<()> {
        if point_count > self.max_points {
            return Err(Error::BudgetExceeded(format!(
                "{point_count} points means {} matchings (limit {} points; override to proceed)",
                double_factorial_odd(point_count),
                self.max_points
            )));
        }
        Ok(())
    }
}

/// `(m-1)!!` for even `m`, saturating.
fn double_factorial_odd(m: usize) -> u128 {
    let mut acc: u128 = 1;
    let mut f = m.saturating_sub(1) as u128;
    while f > 1 {
        acc = acc.saturating_mul(f);
        f -= 2;
    }
    acc
}

/// Visits every perfect matching on `0..point_count-1` exactly once, in
/// the deterministic order that always matches the smallest unmatched
/// point to its candidates in increasing order. The callback receives the
/// partner involution array.
pub fn enumerate_matchings<F: FnMut(&[usize])>(point_count: usize, mut visitor: F) -> Result<()> {
    if point_count == 0 || !point_count.is_multiple_of(2) {
        return Err(Error::MalformedDiagram(format!(
            "point count {point_count} must be even and positive"
        )));
    }
    let mut partner = vec![usize::MAX; point_count];
    visit_matchings(&mut partner, &mut visitor);
    Ok(())
}

fn visit_matchings<F: FnMut(&[usize])>(partner: &mut [usize], visitor: &mut F) {
    let Some(a) = partner.iter().position(|&q| q == usize::MAX) else {
        visitor(partner);
        return;
    };
    for b in a + 1..partner.len() {
        if partner[b] != usize::MAX {
            continue;
        }
        partner[a] = b;
        partner[b] = a;
        visit_matchings(partner, visitor);
        partner[a] = usize::MAX;
        partner[b] = usize::MAX;
    }
}

/// Ordered basis of the chain group `U_k` at a fixed genus: the canonical
/// classes of all k-filling systems of genus g, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Basis {
    genus: usize,
    k: usize,
    classes: Vec<CanonicalClass>,
}

impl Basis {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        2 * self.genus + self.k
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[CanonicalClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &CanonicalClass {
        &self.classes[id]
    }

    /// Position of a canonical word in the basis.
    pub fn index_of(&self, word: &ChordWord) -> Option<usize> {
        self.classes
            .binary_search_by(|c| c.word().cmp(word))
            .ok()
    }

    /// Ids of the order-2 classes, ascending.
    pub fn torsion_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.classes[i].torsion()).collect()
    }

    /// The exact cache-file text form.
    pub fn to_cache_string(&self) -> String {
        let mut out = String::new();
        out.push_str(CACHE_HEADER);
        out.push('\n');
        let _ = writeln!(
            out,
            "genus={} k={} n={} count={}",
            self.genus,
            self.k,
            self.n(),
            self.len()
        );
        for class in &self.classes {
            let _ = writeln!(
                out,
                "{} {}",
                class.word(),
                if class.torsion() { 1 } else { 0 }
            );
        }
        out
    }

    /// Writes the cache file atomically (temp file, then rename).
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".{}.tmp{}",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("basis"),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_cache_string().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Parses a cache file; `None` when the header does not match the
    /// requested `(g, k)` or the format version (stale cache).
    pub fn read_cache(path: &Path, genus: usize, k: usize) -> Result<Option<Basis>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mut lines = text.lines();
        if lines.next() != Some(CACHE_HEADER) {
            return Ok(None);
        }
        let meta = lines.next().unwrap_or("");
        let expect = format!("genus={genus} k={k} n={} ", 2 * genus + k);
        if !meta.starts_with(&expect) {
            return Ok(None);
        }
        let count: usize = meta
            .rsplit("count=")
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad basis header {meta:?}")))?;
        let mut classes = Vec::with_capacity(count);
        for line in lines {
            let (word_part, torsion_part) = line
                .rsplit_once(' ')
                .ok_or_else(|| Error::Parse(format!("bad basis line {line:?}")))?;
            let word = ChordWord::parse(word_part)?;
            let torsion = match torsion_part {
                "0" => false,
                "1" => true,
                other => return Err(Error::Parse(format!("bad torsion flag {other:?}"))),
            };
            let (class, _) = word.canonicalize();
            if class.word().labels() != word.labels() || class.torsion() != torsion {
                return Err(Error::Parse(format!(
                    "cache line {line:?} is not a canonical class"
                )));
            }
            classes.push(class);
        }
        if classes.len() != count {
            return Err(Error::Parse(format!(
                "basis count mismatch: header {count}, found {}",
                classes.len()
            )));
        }
        if !classes.windows(2).all(|w| w[0].word() < w[1].word()) {
            return Err(Error::Parse("basis file not sorted".into()));
        }
        Ok(Some(Basis { genus, k, classes }))
    }
}

/// Enumerates the basis of `U_k` at genus `g`.
pub fn enumerate_basis(genus: usize, k: usize, budget: Budget) -> Result<Basis> {
    let n = 2 * genus + k;
    if n == 0 {
        // the empty diagram is excluded from every chain group
        return Ok(Basis {
            genus,
            k,
            classes: Vec::new(),
        });
    }
    let points = 2 * n;
    budget.check(points)?;
    let b = k + 1;

    // independent subtrees by the partner of point 0
    let maps: Vec<HashMap<Vec<Label>, bool>> = (1..points)
        .into_par_iter()
        .map(|q| {
            let mut found = HashMap::new();
            let mut partner = vec![usize::MAX; points];
            partner[0] = q;
            partner[q] = 0;
            let mut scratch = CanonScratch::new(points);
            collect_classes(&mut partner, b, &mut scratch, &mut found);
            found
        })
        .collect();

    let mut merged: HashMap<Vec<Label>, bool> = HashMap::new();
    for map in maps {
        merged.extend(map);
    }
    let mut entries: Vec<(Vec<Label>, bool)> = merged.into_iter().collect();
    entries.sort_unstable();
    let classes = entries
        .into_iter()
        .map(|(word, torsion)| {
            let word = ChordWord::new(word).expect("canonical words are valid");
            debug_assert!(is_filling_system(&word, genus, k));
            CanonicalClass::from_parts(word, torsion)
        })
        .collect();
    Ok(Basis { genus, k, classes })
}

fn collect_classes(
    partner: &mut Vec<usize>,
    b: usize,
    scratch: &mut CanonScratch,
    found: &mut HashMap<Vec<Label>, bool>,
) {
    let Some(a) = partner.iter().position(|&q| q == usize::MAX) else {
        if has_filling_orbits(partner, b) {
            let word = word_from_partner(partner);
            let (canon, torsion, _) = canonical_form(&word, scratch);
            found.entry(canon).or_insert(torsion);
        }
        return;
    };
    for q in a + 1..partner.len() {
        if partner[q] != usize::MAX {
            continue;
        }
        partner[a] = q;
        partner[q] = a;
        collect_classes(partner, b, scratch, found);
        partner[a] = usize::MAX;
        partner[q] = usize::MAX;
    }
}

/// Reads a valid cache when present, otherwise enumerates and (when a
/// cache directory is given) writes one.
pub fn load_or_enumerate(
    genus: usize,
    k: usize,
    budget: Budget,
    cache_dir: Option<&Path>,
) -> Result<Basis> {
    let path = cache_dir.map(|d| d.join(format!("basis-g{genus}-k{k}.txt")));
    if let Some(p) = &path {
        if let Some(basis) = Basis::read_cache(p, genus, k)? {
            return Ok(basis);
        }
    }
    let basis = enumerate_basis(genus, k, budget)?;
    if let Some(p) = &path {
        basis.write_cache(p)?;
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts_are_double_factorials() {
        // (2n-1)!! for n = 1..7
        let expected = [1usize, 3, 15, 105, 945, 10395, 135135];
        for (i, &want) in expected.iter().enumerate() {
            let mut count = 0usize;
            enumerate_matchings(2 * (i + 1), |_| count += 1).unwrap();
            assert_eq!(count, want, "2n = {}", 2 * (i + 1));
        }
    }

    #[test]
    fn matchings_are_distinct_involutions() {
        let mut seen = std::collections::HashSet::new();
        enumerate_matchings(8, |partner| {
            for (p, &q) in partner.iter().enumerate() {
                assert_eq!(partner[q], p);
                assert_ne!(q, p);
            }
            assert!(seen.insert(partner.to_vec()));
        })
        .unwrap();
        assert_eq!(seen.len(), 105);
    }

    #[test]
    fn genus_one_basis_is_the_crossing_pair() {
        let basis = enumerate_basis(1, 0, Budget::default()).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.class(0).word().labels(), &[1, 2, 1, 2]);
        assert!(basis.class(0).torsion());
    }

    #[test]
    fn genus_one_k1_basis_is_the_triangle() {
        let basis = enumerate_basis(1, 1, Budget::default()).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.class(0).word().labels(), &[1, 2, 3, 1, 2, 3]);
        assert!(!basis.class(0).torsion());
    }

    #[test]
    fn genus_one_k2_basis_is_empty() {
        // three boundary cycles of length >= 3 cannot fit on 8 points
        let basis = enumerate_basis(1, 2, Budget::default()).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn genus_two_sizes_match_oracle() {
        assert_eq!(enumerate_basis(2, 0, Budget::default()).unwrap().len(), 4);
        assert_eq!(enumerate_basis(2, 1, Budget::default()).unwrap().len(), 21);
        assert_eq!(enumerate_basis(2, 2, Budget::default()).unwrap().len(), 45);
    }

    #[test]
    fn every_class_is_canonical_and_filling() {
        let basis = enumerate_basis(2, 1, Budget::default()).unwrap();
        for class in basis.classes() {
            assert!(is_filling_system(class.word(), 2, 1));
            let (again, sign) = class.word().canonicalize();
            assert_eq!(again.word(), class.word());
            assert_eq!(sign, 1);
            assert_eq!(again.torsion(), class.torsion());
        }
    }

    #[test]
    fn budget_refuses_large_spaces() {
        let err = enumerate_basis(9, 1, Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)), "{err}");
        assert!(Budget::default().check(20).is_ok());
        assert!(Budget::default().check(22).is_err());
        assert!(Budget::unlimited().check(38).is_ok());
    }

    #[test]
    fn enumeration_is_deterministic_across_thread_counts() {
        let reference = enumerate_basis(2, 1, Budget::default())
            .unwrap()
            .to_cache_string();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let text = pool.install(|| {
                enumerate_basis(2, 1, Budget::default())
                    .unwrap()
                    .to_cache_string()
            });
            assert_eq!(text, reference, "threads = {threads}");
        }
    }

    #[test]
    fn cache_roundtrip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let basis = enumerate_basis(2, 0, Budget::default()).unwrap();
        let path = dir.path().join("basis-g2-k0.txt");
        basis.write_cache(&path).unwrap();
        let back = Basis::read_cache(&path, 2, 0).unwrap().unwrap();
        assert_eq!(back, basis);
        // mismatched parameters invalidate
        assert!(Basis::read_cache(&path, 2, 1).unwrap().is_none());
        // stale version header invalidates
        let mut text = std::fs::read_to_string(&path).unwrap();
        text = text.replace("v1", "v0");
        std::fs::write(&path, text).unwrap();
        assert!(Basis::read_cache(&path, 2, 0).unwrap().is_none());
    }

    #[test]
    fn load_or_enumerate_uses_cache(){
        let dir = tempfile::tempdir().unwrap();
        let a = load_or_enumerate(1, 0, Budget::default(), Some(dir.path())).unwrap();
        let b = load_or_enumerate(1, 0, Budget::default(), Some(dir.path())).unwrap();
        assert_eq!(a, b);
        assert!(dir.path().join("basis-g1-k0.txt").exists());
    }
}
