//! The chain groups `U_k` on enumerated bases and their boundary maps.
//!
//! `U_k` is presented as `Z^c / <2 e_j : j torsion>`: one generator per
//! canonical class, with order-2 generators where a rotational symmetry
//! reorders the chords by an odd permutation. The boundary of a class is
//! the signed sum of its chord deletions, each canonicalized back into the
//! basis one degree down; coefficients landing on torsion classes live in
//! `{0, 1}`.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::diagram::{CanonicalClass, ChordWord};
use crate::enumerate::{enumerate_basis, Basis, Budget};
use crate::error::{Error, Result};
use crate::filling::{delete_chord, ChainTerm, FillingSystem};
use crate::mm;
use crate::zlinalg::{
    cokernel_with_torsion, solve_with_torsion, AbelianGroup, PreimageCertificate,
    SparseIntMatrix,
};

/// Sparse element of `U_k` over an enumerated basis: class id to
/// coefficient, no zeros, torsion coefficients reduced to `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainVector {
    genus: usize,
    k: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl ChainVector {
    pub fn zero(genus: usize, k: usize) -> Self {
        ChainVector {
            genus,
            k,
            coeffs: BTreeMap::new(),
        }
    }

    /// `coefficient * e_id`, normalized against the basis torsion flags.
    pub fn singleton(basis: &Basis, id: usize, coefficient: i64) -> Self {
        let mut v = ChainVector::zero(basis.genus(), basis.k());
        v.add_scaled(basis, id, coefficient);
        v
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coefficient(&self, id: usize) -> i64 {
        self.coeffs.get(&id).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&id, &v)| (id, v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self += delta * e_id`, reducing mod 2 on torsion classes.
    pub fn add_scaled(&mut self, basis: &Basis, id: usize, delta: i64) {
        let torsion = basis.class(id).torsion();
        let slot = self.coeffs.entry(id).or_insert(0);
        *slot += delta;
        if torsion {
            *slot = slot.rem_euclid(2);
        }
        if *slot == 0 {
            self.coeffs.remove(&id);
        }
    }

    /// Dense integer image of the vector, length `basis.len()`.
    pub fn to_dense(&self, basis: &Basis) -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); basis.len()];
        for (&id, &v) in &self.coeffs {
            out[id] = BigInt::from(v);
        }
        out
    }
}

/// One aggregated term of a basis-free boundary computation.
#[derive(Clone, Debug)]
pub struct BoundaryTerm {
    pub class: CanonicalClass,
    pub coefficient: i64,
}

/// Boundary of a single filling system as canonical classes with signed
/// multiplicities, independent of any enumerated basis. Torsion classes
/// carry their coefficient mod 2; zero terms are dropped. Terms come back
/// sorted by canonical word.
pub fn boundary_terms(u: &FillingSystem) -> Result<Vec<BoundaryTerm>> {
    let mut acc: BTreeMap<ChordWord, (CanonicalClass, i64)> = BTreeMap::new();
    for i in 1..=u.n() {
        match delete_chord(u, i)? {
            ChainTerm::Zero => {}
            ChainTerm::Term { word, sign } => {
                let (class, s) = word.canonicalize();
                let delta = (sign * s) as i64;
                let entry = acc
                    .entry(class.word().clone())
                    .or_insert_with(|| (class, 0));
                entry.1 += delta;
            }
        }
    }
    let mut out = Vec::new();
    for (_, (class, mut coefficient)) in acc {
        if class.torsion() {
            coefficient = coefficient.rem_euclid(2);
        }
        if coefficient != 0 {
            out.push(BoundaryTerm { class, coefficient });
        }
    }
    Ok(out)
}

/// Boundary of a basis class of `U_k`, expressed in the `U_{k-1}` basis.
pub fn differential(class: &CanonicalClass, target: &Basis) -> Result<ChainVector> {
    let u = FillingSystem::new(class.word().clone())?;
    if u.genus() != target.genus() || u.k() != target.k() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "boundary of a (g, k) = ({}, {}) class does not land in U_{} at genus {}",
            u.genus(),
            u.k(),
            target.k(),
            target.genus()
        )));
    }
    let mut v = ChainVector::zero(target.genus(), target.k());
    for term in boundary_terms(&u)? {
        let id = target.index_of(term.class.word()).ok_or_else(|| {
            Error::InternalConsistency(format!(
                "boundary class {} missing from the U_{} basis",
                term.class.word(),
                target.k()
            ))
        })?;
        v.add_scaled(target, id, term.coefficient);
    }
    Ok(v)
}

/// One column of the boundary matrix: `(row id, coefficient)` pairs sorted
/// by row. Exposed separately so large runs can stream columns without
/// materializing the matrix.
pub fn boundary_column(class: &CanonicalClass, rows: &Basis) -> Result<Vec<(u32, i64)>> {
    let v = differential(class, rows)?;
    Ok(v.entries().map(|(id, c)| (id as u32, c)).collect())
}

/// Sparse integer matrix of `d : U_k -> U_{k-1}` over enumerated bases.
#[derive(Clone, Debug)]
pub struct DifferentialMatrix {
    rows: Basis,
    cols: Basis,
    columns: Vec<Vec<(u32, i64)>>,
}

impl DifferentialMatrix {
    pub fn genus(&self) -> usize {
        self.cols.genus()
    }

    /// Degree of the source group.
    pub fn k(&self) -> usize {
        self.cols.k()
    }

    pub fn row_basis(&self) -> &Basis {
        &self.rows
    }

    pub fn col_basis(&self) -> &Basis {
        &self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.columns[c]
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&(r as u32), |&(row, _)| row)
            .map(|i| self.columns[c][i].1)
            .unwrap_or(0)
    }

    /// Torsion row ids, ascending.
    pub fn torsion_rows(&self) -> Vec<usize> {
        self.rows.torsion_ids()
    }

    pub fn torsion_cols(&self) -> Vec<usize> {
        self.cols.torsion_ids()
    }

    pub fn to_sparse(&self) -> SparseIntMatrix {
        SparseIntMatrix::from_triples(
            self.rows.len(),
            self.cols.len(),
            self.columns.iter().enumerate().flat_map(|(c, col)| {
                col.iter().map(move |&(r, v)| (r as usize, c, v))
            }),
        )
        .expect("assembled columns are well-formed")
    }

    /// Cokernel of the map into `U_{k-1}` including its order-2 relations.
    pub fn cokernel(&self) -> AbelianGroup {
        cokernel_with_torsion(&self.to_sparse(), &self.torsion_rows())
    }

    /// Integer preimage of `v` under `[d | 2 e_torsion]`, verified by
    /// multiplication; `None` when `v` is not in the image.
    pub fn solve_in_image(&self, v: &ChainVector) -> Result<Option<PreimageCertificate>> {
        if v.genus() != self.rows.genus() || v.k() != self.rows.k() {
            return Err(Error::DimensionMismatch(format!(
                "vector lives in U_{} at genus {}, matrix rows are U_{} at genus {}",
                v.k(),
                v.genus(),
                self.rows.k(),
                self.rows.genus()
            )));
        }
        solve_with_torsion(
            &self.to_sparse(),
            &self.torsion_rows(),
            &v.to_dense(&self.rows),
        )
    }

    /// Writes the MatrixMarket file and its `.torsion` sidecar.
    pub fn write_matrix_market(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        mm::write_matrix_market(&self.to_sparse(), &mut file)?;
        let sidecar = sidecar_path(path);
        let mut file = std::fs::File::create(sidecar)?;
        mm::write_torsion_sidecar(&self.torsion_rows(), &mut file)?;
        Ok(())
    }
}

pub fn sidecar_path(mtx: &Path) -> std::path::PathBuf {
    let mut s = mtx.as_os_str().to_owned();
    s.push(".torsion");
    std::path::PathBuf::from(s)
}

/// Assembles `d : U_k -> U_{k-1}` from freshly enumerated bases.
pub fn assemble_matrix(genus: usize, k: usize, budget: Budget) -> Result<DifferentialMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "the differential needs k >= 1; U_{-1} is not modeled".into(),
        ));
    }
    let rows = enumerate_basis(genus, k - 1, budget)?;
    let cols = enumerate_basis(genus, k, budget)?;
    assemble_matrix_with(rows, cols)
}

/// Assembles the matrix over existing bases (columns in parallel; the
/// result is independent of scheduling).
pub fn assemble_matrix_with(rows: Basis, cols: Basis) -> Result<DifferentialMatrix> {
    if rows.genus() != cols.genus() || rows.k() + 1 != cols.k() {
        return Err(Error::DimensionMismatch(format!(
            "bases (g={}, k={}) and (g={}, k={}) are not adjacent degrees",
            rows.genus(),
            rows.k(),
            cols.genus(),
            cols.k()
        )));
    }
    let columns: Vec<Vec<(u32, i64)>> = cols
        .classes()
        .par_iter()
        .map(|class| boundary_column(class, &rows))
        .collect::<Result<_>>()?;
    Ok(DifferentialMatrix {
        rows,
        cols,
        columns,
    })
}

/// Verifies `d1 . d2 = 0` as maps `U_2 -> U_1 -> U_0`, with coefficients
/// on torsion rows of `U_0` compared mod 2.
pub fn compose_is_zero(d1: &DifferentialMatrix, d2: &DifferentialMatrix) -> Result<bool> {
    if d1.cols.genus() != d2.rows.genus() || d1.cols.k() != d2.rows.k() {
        return Err(Error::DimensionMismatch(
            "inner bases of the composition differ".into(),
        ));
    }
    let torsion: Vec<bool> = d1
        .rows
        .classes()
        .iter()
        .map(|c| c.torsion())
        .collect();
    let ok = (0..d2.col_count()).into_par_iter().all(|c2| {
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for &(mid, v2) in d2.column(c2) {
            for &(r, v1) in d1.column(mid as usize) {
                *acc.entry(r).or_insert(0) += v1 * v2;
            }
        }
        acc.into_iter().all(|(r, total)| {
            if torsion[r as usize] {
                total % 2 == 0
            } else {
                total == 0
            }
        })
    });
    Ok(ok)
}

/// Chain-complex sanity at one genus: assembles both boundary maps and
/// checks that their composition vanishes.
pub fn compose_check(genus: usize, budget: Budget) -> Result<bool> {
    let u0 = enumerate_basis(genus, 0, budget)?;
    let u1 = enumerate_basis(genus, 1, budget)?;
    let u2 = enumerate_basis(genus, 2, budget)?;
    let d1 = assemble_matrix_with(u0, u1.clone())?;
    let d2 = assemble_matrix_with(u1, u2)?;
    compose_is_zero(&d1, &d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::is_disconnected;

    fn fs(labels: &[u16]) -> FillingSystem {
        FillingSystem::new(ChordWord::new(labels.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn boundary_of_five_chord_path() {
        // the 1-filling Y at genus 2: two deletions hit the 4-chord path
        // class, one middle deletion hits a disconnected class
        let y = fs(&[1, 2, 1, 3, 2, 4, 3, 5, 4, 5]);
        let terms = boundary_terms(&y).unwrap();
        let x_word = ChordWord::new(vec![1, 2, 1, 3, 2, 4, 3, 4]).unwrap();
        let mut x_coeff = None;
        for term in &terms {
            if term.class.word() == &x_word {
                x_coeff = Some(term.coefficient);
            } else {
                assert!(is_disconnected(term.class.word()), "{:?}", term.class);
                assert_eq!(term.coefficient.abs(), 1);
            }
        }
        assert_eq!(x_coeff.map(i64::abs), Some(2));
        assert_eq!(terms.len(), 2);
    }

    #[test]
    fn differential_on_genus_one() {
        // U_1(1) is the triangle alone; U_0(1) is the order-2 crossing pair
        let u0 = enumerate_basis(1, 0, Budget::default()).unwrap();
        let u1 = enumerate_basis(1, 1, Budget::default()).unwrap();
        let v = differential(u1.class(0), &u0).unwrap();
        assert_eq!(v.coefficient(0), 1); // 3 deletions, mod 2 on the torsion row
        assert_eq!(v.support_len(), 1);
    }

    #[test]
    fn differential_rejects_wrong_target() {
        let u0 = enumerate_basis(1, 0, Budget::default()).unwrap();
        assert!(differential(u0.class(0), &u0).is_err());
    }

    #[test]
    fn matrix_genus_one() {
        let d = assemble_matrix(1, 1, Budget::default()).unwrap();
        assert_eq!(d.row_count(), 1);
        assert_eq!(d.col_count(), 1);
        assert_eq!(d.entry(0, 0), 1);
        assert_eq!(d.torsion_rows(), vec![0]);
        assert!(d.torsion_cols().is_empty());
        // cokernel of [1 | 2e_0] is trivial
        assert!(d.cokernel().is_trivial());
    }

    #[test]
    fn matrix_empty_source() {
        // U_2 at genus 1 is empty: a matrix with no columns
        let d = assemble_matrix(1, 2, Budget::default()).unwrap();
        assert_eq!(d.row_count(), 1);
        assert_eq!(d.col_count(), 0);
        assert_eq!(d.nnz(), 0);
    }

    #[test]
    fn matrix_rejects_k_zero() {
        assert!(matches!(
            assemble_matrix(1, 0, Budget::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn columns_reproduce_differential_and_are_sparse() {
        let d = assemble_matrix(2, 1, Budget::default()).unwrap();
        assert_eq!(d.row_count(), 4);
        assert_eq!(d.col_count(), 21);
        for c in 0..d.col_count() {
            assert!(d.column(c).len() <= d.col_basis().n());
            let v = differential(d.col_basis().class(c), d.row_basis()).unwrap();
            for (id, coeff) in v.entries() {
                assert_eq!(d.entry(id, c), coeff);
            }
            assert_eq!(v.support_len(), d.column(c).len());
        }
    }

    #[test]
    fn torsion_rows_hold_reduced_entries() {
        let d = assemble_matrix(2, 1, Budget::default()).unwrap();
        let torsion = d.torsion_rows();
        for c in 0..d.col_count() {
            for &(r, v) in d.column(c) {
                if torsion.contains(&(r as usize)) {
                    assert!(v == 0 || v == 1);
                }
            }
        }
    }

    #[test]
    fn torsion_columns_land_on_torsion_rows() {
        // 2u = 0 forces 2 d(u) = 0, so those columns avoid free rows
        let d = assemble_matrix(2, 2, Budget::default()).unwrap();
        let torsion_rows = d.torsion_rows();
        for &c in &d.torsion_cols() {
            for &(r, _) in d.column(c) {
                assert!(torsion_rows.contains(&(r as usize)), "column {c} row {r}");
            }
        }
    }

    #[test]
    fn compose_vanishes_for_small_genus() {
        assert!(compose_check(1, Budget::default()).unwrap());
        assert!(compose_check(2, Budget::default()).unwrap());
    }

    #[test]
    fn differential_is_rotation_equivariant() {
        // rotate() relabels by first occurrence, which reorders the chords;
        // the boundary follows the relabeling sign. Classes and torsion
        // coefficients are on the nose, free coefficients up to that sign.
        let u1 = enumerate_basis(2, 1, Budget::default()).unwrap();
        let u0 = enumerate_basis(2, 0, Budget::default()).unwrap();
        for class in u1.classes().iter().take(5) {
            let reference = differential(class, &u0).unwrap();
            for r in 0..class.word().point_count() {
                let rotated_word = class.word().rotate(r);
                let (rot_class, s) = rotated_word.canonicalize();
                assert_eq!(rot_class.word(), class.word());
                let rotated = FillingSystem::new(rotated_word).unwrap();
                let mut v = ChainVector::zero(u0.genus(), u0.k());
                for term in boundary_terms(&rotated).unwrap() {
                    let id = u0.index_of(term.class.word()).unwrap();
                    v.add_scaled(&u0, id, term.coefficient);
                }
                assert_eq!(v.support_len(), reference.support_len());
                for (id, coeff) in reference.entries() {
                    let expected = if u0.class(id).torsion() {
                        coeff
                    } else {
                        s as i64 * coeff
                    };
                    assert_eq!(
                        v.coefficient(id),
                        expected,
                        "rotation {r} of {}, row {id}",
                        class.word()
                    );
                }
            }
        }
    }

    #[test]
    fn sign_equivariance_under_reordering() {
        let u1 = enumerate_basis(2, 1, Budget::default()).unwrap();
        let u0 = enumerate_basis(2, 0, Budget::default()).unwrap();
        let class = u1.class(3);
        let reference = differential(class, &u0).unwrap();
        // odd permutation of the five chords
        let (reordered, sign) = class.word().apply_permutation(&[2, 1, 3, 4, 5]).unwrap();
        assert_eq!(sign, -1);
        let mut v = ChainVector::zero(u0.genus(), u0.k());
        for term in boundary_terms(&FillingSystem::new(reordered).unwrap()).unwrap() {
            let id = u0.index_of(term.class.word()).unwrap();
            v.add_scaled(&u0, id, term.coefficient);
        }
        for (id, coeff) in reference.entries() {
            if u0.class(id).torsion() {
                assert_eq!(v.coefficient(id), coeff);
            } else {
                assert_eq!(v.coefficient(id), -coeff, "class {id}");
            }
        }
        assert_eq!(v.support_len(), reference.support_len());
    }

    #[test]
    fn solve_in_image_dimension_check() {
        let d = assemble_matrix(2, 1, Budget::default()).unwrap();
        let wrong = ChainVector::zero(1, 0);
        assert!(d.solve_in_image(&wrong).is_err());
        let zero = ChainVector::zero(2, 0);
        let cert = d.solve_in_image(&zero).unwrap().unwrap();
        assert!(cert.coefficients.is_empty());
    }
}
