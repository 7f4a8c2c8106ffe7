//! Labeled dense matrices over GF(q).
//!
//! Rows are labeled by input ids and columns by output ids, so submatrix
//! extraction is by name and never by drifting indices. Three primitives
//! carry the whole algorithm: exact rank, left-solve against a full-rank
//! square matrix (which yields the minimal dependent row set), and perfect
//! matching extraction on the support of a full-rank matrix.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Fe, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    DimensionMismatch { expected: usize, found: usize },
    DuplicateLabel(u32),
    UnknownLabel(u32),
    /// A square full-rank matrix was required.
    SingularMatrix,
    /// The base of a rank-extension check was not square full rank.
    BaseNotFullRank,
    /// perfect_matching was called on a matrix that is not square full rank.
    NotFullRank,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            LinalgError::DuplicateLabel(l) => write!(f, "duplicate label {l}"),
            LinalgError::UnknownLabel(l) => write!(f, "unknown label {l}"),
            LinalgError::SingularMatrix => write!(f, "matrix is singular"),
            LinalgError::BaseNotFullRank => write!(f, "base matrix is not square full rank"),
            LinalgError::NotFullRank => write!(f, "matrix is not square full rank"),
        }
    }
}

impl std::error::Error for LinalgError {}

/// Dense row-major matrix over GF(q) with row and column labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    row_labels: Vec<u32>,
    col_labels: Vec<u32>,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {:?} rows={:?} cols={:?}", self.field, self.row_labels, self.col_labels)?;
        for r in 0..self.rows() {
            let row: Vec<u32> = (0..self.cols()).map(|c| self.data[r * self.cols() + c].value()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// A set of (row label, column label) pairs supported by nonzero entries,
/// each label appearing at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: BTreeMap<u32, u32>,
}

impl Matching {
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.pairs.iter().map(|(&r, &c)| (r, c))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn output_for(&self, row: u32) -> Option<u32> {
        self.pairs.get(&row).copied()
    }
}

fn check_unique(labels: &[u32]) -> Result<(), LinalgError> {
    let mut seen = std::collections::BTreeSet::new();
    for &l in labels {
        if !seen.insert(l) {
            return Err(LinalgError::DuplicateLabel(l));
        }
    }
    Ok(())
}

impl Matrix {
    pub fn new(
        field: Field,
        row_labels: Vec<u32>,
        col_labels: Vec<u32>,
        data: Vec<Fe>,
    ) -> Result<Matrix, LinalgError> {
        if data.len() != row_labels.len() * col_labels.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: row_labels.len() * col_labels.len(),
                found: data.len(),
            });
        }
        check_unique(&row_labels)?;
        check_unique(&col_labels)?;
        Ok(Matrix {
            field,
            row_labels,
            col_labels,
            data,
        })
    }

    pub fn zero(field: Field, row_labels: Vec<u32>, col_labels: Vec<u32>) -> Result<Matrix, LinalgError> {
        let n = row_labels.len() * col_labels.len();
        Matrix::new(field, row_labels, col_labels, vec![Fe::ZERO; n])
    }

    /// Convenience constructor from integer entries with positional labels.
    pub fn from_rows(field: &Field, rows: &[&[u32]]) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            for &v in *r {
                data.push(field.element(v).expect("entry in range"));
            }
        }
        Matrix {
            field: field.clone(),
            row_labels: (0..nrows as u32).collect(),
            col_labels: (0..ncols as u32).collect(),
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[u32] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[u32] {
        &self.col_labels
    }

    pub fn get_idx(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols() + c]
    }

    pub fn set_idx(&mut self, r: usize, c: usize, v: Fe) {
        let cols = self.cols();
        self.data[r * cols + c] = v;
    }

    pub fn row_index(&self, label: u32) -> Result<usize, LinalgError> {
        self.row_labels
            .iter()
            .position(|&l| l == label)
            .ok_or(LinalgError::UnknownLabel(label))
    }

    pub fn col_index(&self, label: u32) -> Result<usize, LinalgError> {
        self.col_labels
            .iter()
            .position(|&l| l == label)
            .ok_or(LinalgError::UnknownLabel(label))
    }

    pub fn get(&self, row_label: u32, col_label: u32) -> Result<Fe, LinalgError> {
        Ok(self.get_idx(self.row_index(row_label)?, self.col_index(col_label)?))
    }

    /// Row of entries in column-label order.
    pub fn row(&self, label: u32) -> Result<Vec<Fe>, LinalgError> {
        let r = self.row_index(label)?;
        Ok((0..self.cols()).map(|c| self.get_idx(r, c)).collect())
    }

    /// Submatrix addressed by label, in the order the labels are given.
    pub fn submatrix(&self, rows: &[u32], cols: &[u32]) -> Result<Matrix, LinalgError> {
        let ri: Vec<usize> = rows.iter().map(|&l| self.row_index(l)).collect::<Result<_, _>>()?;
        let ci: Vec<usize> = cols.iter().map(|&l| self.col_index(l)).collect::<Result<_, _>>()?;
        let mut data = Vec::with_capacity(ri.len() * ci.len());
        for &r in &ri {
            for &c in &ci {
                data.push(self.get_idx(r, c));
            }
        }
        Matrix::new(self.field.clone(), rows.to_vec(), cols.to_vec(), data)
    }

    pub fn delete_row(&self, label: u32) -> Result<Matrix, LinalgError> {
        let keep: Vec<u32> = self.row_labels.iter().copied().filter(|&l| l != label).collect();
        if keep.len() == self.rows() {
            return Err(LinalgError::UnknownLabel(label));
        }
        self.submatrix(&keep, &self.col_labels.clone())
    }

    /// Exact rank by Gaussian elimination with first-nonzero pivoting.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let (nr, nc) = (self.rows(), self.cols());
        let f = &self.field;
        let mut rank = 0;
        for col in 0..nc {
            let pivot = (rank..nr).find(|&r| !work[r * nc + col].is_zero());
            let Some(pr) = pivot else { continue };
            for c in 0..nc {
                work.swap(pr * nc + c, rank * nc + c);
            }
            let inv = f.inv(work[rank * nc + col]).expect("pivot nonzero");
            for r in rank + 1..nr {
                let factor = f.mul(work[r * nc + col], inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..nc {
                    let sub = f.mul(factor, work[rank * nc + c]);
                    work[r * nc + c] = f.sub(work[r * nc + c], sub);
                }
            }
            rank += 1;
            if rank == nr {
                break;
            }
        }
        rank
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_full_rank(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    /// Whether extending a square full-rank base by one labeled row, one
    /// labeled column and the corner entry keeps the matrix full rank.
    ///
    /// `new_row` holds entries in the base's column order, `new_col` in the
    /// base's row order; `corner` is the (new row, new column) entry.
    pub fn is_full_rank_extension(
        &self,
        new_row_label: u32,
        new_row: &[Fe],
        new_col_label: u32,
        new_col: &[Fe],
        corner: Fe,
    ) -> Result<bool, LinalgError> {
        if !self.is_full_rank() {
            return Err(LinalgError::BaseNotFullRank);
        }
        if new_row.len() != self.cols() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols(),
                found: new_row.len(),
            });
        }
        if new_col.len() != self.rows() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows(),
                found: new_col.len(),
            });
        }
        let k = self.rows();
        let mut rows = self.row_labels.clone();
        rows.push(new_row_label);
        let mut cols = self.col_labels.clone();
        cols.push(new_col_label);
        check_unique(&rows)?;
        check_unique(&cols)?;
        let mut data = Vec::with_capacity((k + 1) * (k + 1));
        for (r, &col_entry) in new_col.iter().enumerate() {
            for c in 0..k {
                data.push(self.get_idx(r, c));
            }
            data.push(col_entry);
        }
        data.extend_from_slice(new_row);
        data.push(corner);
        let ext = Matrix::new(self.field.clone(), rows, cols, data)?;
        Ok(ext.rank() == k + 1)
    }

    /// Solves c * A = x for the unique c, where A = self is square full rank
    /// and x is given in column-label order.
    pub fn solve_left(&self, x: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::SingularMatrix);
        }
        let k = self.rows();
        if x.len() != k {
            return Err(LinalgError::DimensionMismatch {
                expected: k,
                found: x.len(),
            });
        }
        // c * A = x is A^T c^T = x^T: eliminate on the transpose augmented
        // with x.
        let f = &self.field;
        let w = k + 1;
        let mut aug = vec![Fe::ZERO; k * w];
        for r in 0..k {
            for c in 0..k {
                aug[r * w + c] = self.get_idx(c, r);
            }
            aug[r * w + k] = x[r];
        }
        let mut pivots = Vec::with_capacity(k);
        let mut row = 0;
        for col in 0..k {
            let Some(pr) = (row..k).find(|&r| !aug[r * w + col].is_zero()) else {
                return Err(LinalgError::SingularMatrix);
            };
            for c in 0..w {
                aug.swap(pr * w + c, row * w + c);
            }
            let inv = f.inv(aug[row * w + col]).expect("pivot nonzero");
            for c in col..w {
                aug[row * w + c] = f.mul(aug[row * w + c], inv);
            }
            for r in 0..k {
                if r == row || aug[r * w + col].is_zero() {
                    continue;
                }
                let factor = aug[r * w + col];
                for c in col..w {
                    let sub = f.mul(factor, aug[row * w + c]);
                    aug[r * w + c] = f.sub(aug[r * w + c], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut c_out = vec![Fe::ZERO; k];
        for (r, &col) in pivots.iter().enumerate() {
            c_out[col] = aug[r * w + k];
        }
        Ok(c_out)
    }

    /// The smallest set of row labels whose span contains the candidate row:
    /// the labels at nonzero coordinates of the unique solution of
    /// c * self = candidate. Requires self square full rank.
    pub fn find_l(&self, candidate_row: &[Fe]) -> Result<std::collections::BTreeSet<u32>, LinalgError> {
        let c = self.solve_left(candidate_row)?;
        Ok(self
            .row_labels
            .iter()
            .zip(c.iter())
            .filter(|(_, coeff)| !coeff.is_zero())
            .map(|(&l, _)| l)
            .collect())
    }

    /// A perfect matching inside the support of a square full-rank matrix,
    /// as (row label, column label) pairs. Existence is guaranteed by full
    /// rank: the determinant expansion has a nonzero term.
    ///
    /// Deterministic: augmenting paths are sought in ascending row order,
    /// scanning columns in ascending order.
    pub fn perfect_matching(&self) -> Result<Matching, LinalgError> {
        if !self.is_full_rank() {
            return Err(LinalgError::NotFullRank);
        }
        let k = self.rows();
        // col_match[c] = row currently matched to column c.
        let mut col_match: Vec<Option<usize>> = vec![None; k];
        for r in 0..k {
            let mut seen = vec![false; k];
            let ok = self.augment(r, &mut seen, &mut col_match);
            assert!(ok, "full-rank matrix must admit a support matching");
        }
        let mut pairs = BTreeMap::new();
        for (c, m) in col_match.iter().enumerate() {
            let r = m.expect("perfect matching covers all columns");
            pairs.insert(self.row_labels[r], self.col_labels[c]);
        }
        Ok(Matching { pairs })
    }

    fn augment(&self, r: usize, seen: &mut [bool], col_match: &mut [Option<usize>]) -> bool {
        for c in 0..self.cols() {
            if seen[c] || self.get_idx(r, c).is_zero() {
                continue;
            }
            seen[c] = true;
            if col_match[c].is_none() || self.augment(col_match[c].unwrap(), seen, col_match) {
                col_match[c] = Some(r);
                return true;
            }
        }
        false
    }

    /// Matrix product; column labels of self must equal row labels of rhs
    /// (same order).
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.col_labels != rhs.row_labels {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols(),
                found: rhs.rows(),
            });
        }
        let f = &self.field;
        let mut out = Matrix::zero(f.clone(), self.row_labels.clone(), rhs.col_labels.clone())?;
        for r in 0..self.rows() {
            for inner in 0..self.cols() {
                let a = self.get_idx(r, inner);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols() {
                    let add = f.mul(a, rhs.get_idx(inner, c));
                    let cur = out.get_idx(r, c);
                    out.set_idx(r, c, f.add(cur, add));
                }
            }
        }
        Ok(out)
    }

    /// Row-vector product x * self, with x in row-label order.
    pub fn row_vec_mul(&self, x: &[Fe]) -> Result<Vec<Fe>, LinalgError> {
        if x.len() != self.rows() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows(),
                found: x.len(),
            });
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.cols()];
        for (r, &xv) in x.iter().enumerate() {
            if xv.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(xv, self.get_idx(r, c)));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn fe(field: &Field, v: u32) -> Fe {
        field.element(v).unwrap()
    }

    #[test]
    fn rank_examples() {
        let g2 = f(2);
        let m = Matrix::from_rows(&g2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);

        let g4 = f(4);
        let m = Matrix::from_rows(&g4, &[&[1, 1], &[1, 2]]);
        assert_eq!(m.rank(), 2);

        let tri = Matrix::from_rows(
            &g2,
            &[&[1, 1, 1, 1], &[0, 1, 1, 1], &[0, 0, 1, 1], &[0, 0, 0, 1]],
        );
        assert_eq!(tri.rank(), 4);
    }

    #[test]
    fn rank_invariant_under_permutation_and_scaling() {
        let g5 = f(5);
        let m = Matrix::from_rows(&g5, &[&[1, 2, 0], &[3, 0, 4], &[0, 1, 2]]);
        let base = m.rank();
        // Permute rows via submatrix.
        let perm = m.submatrix(&[2, 0, 1], &[1, 2, 0]).unwrap();
        assert_eq!(perm.rank(), base);
        // Scale one row by a nonzero scalar.
        let mut scaled = m.clone();
        for c in 0..3 {
            let v = scaled.get_idx(1, c);
            scaled.set_idx(1, c, g5.mul(v, fe(&g5, 3)));
        }
        assert_eq!(scaled.rank(), base);
    }

    #[test]
    fn full_rank_extension_examples() {
        let g2 = f(2);
        // Base rows x3, x4 over columns y1, y3.
        let base = Matrix::new(
            g2.clone(),
            vec![3, 4],
            vec![1, 3],
            vec![Fe(1), Fe(1), Fe(0), Fe(1)],
        )
        .unwrap();
        // Extending by a row/column pair that raises the rank to 3.
        assert!(base
            .is_full_rank_extension(5, &[Fe(0), Fe(0)], 5, &[Fe(0), Fe(1)], Fe(1))
            .unwrap());
        // Extension whose new row is dependent: rank stays 2.
        assert!(!base
            .is_full_rank_extension(5, &[Fe(1), Fe(0)], 4, &[Fe(0), Fe(1)], Fe(1))
            .unwrap());
        // Empty base: any nonzero corner extends to rank 1.
        let empty = Matrix::new(g2.clone(), vec![], vec![], vec![]).unwrap();
        assert!(empty.is_full_rank_extension(7, &[], 9, &[], Fe(1)).unwrap());
        assert!(!empty.is_full_rank_extension(7, &[], 9, &[], Fe(0)).unwrap());
        // Singular base is rejected.
        let sing = Matrix::from_rows(&g2, &[&[1, 1], &[1, 1]]);
        assert_eq!(
            sing.is_full_rank_extension(5, &[Fe(0), Fe(0)], 6, &[Fe(0), Fe(0)], Fe(1)),
            Err(LinalgError::BaseNotFullRank)
        );
    }

    #[test]
    fn solve_left_identity_and_gf2() {
        let g2 = f(2);
        let id = Matrix::from_rows(&g2, &[&[1, 0], &[0, 1]]);
        let x = vec![Fe(1), Fe(0)];
        assert_eq!(id.solve_left(&x).unwrap(), x);

        let a = Matrix::from_rows(&g2, &[&[1, 1], &[0, 1]]);
        // Exhaustive check over all 4 candidate vectors over GF(2) gives
        // c = [1, 1] as the unique solution of c * a = [1, 0].
        let c = a.solve_left(&[Fe(1), Fe(0)]).unwrap();
        assert_eq!(c, vec![Fe(1), Fe(1)]);
        let mut found = None;
        for c0 in 0..2u32 {
            for c1 in 0..2u32 {
                let cand = vec![fe(&g2, c0), fe(&g2, c1)];
                let prod = {
                    let mut out = vec![Fe::ZERO; 2];
                    for (r, cv) in cand.iter().enumerate() {
                        for (col, slot) in out.iter_mut().enumerate() {
                            *slot = g2.add(*slot, g2.mul(*cv, a.get_idx(r, col)));
                        }
                    }
                    out
                };
                if prod == vec![Fe(1), Fe(0)] {
                    assert!(found.is_none(), "solution must be unique");
                    found = Some(cand);
                }
            }
        }
        assert_eq!(found.unwrap(), c);
    }

    #[test]
    fn solve_left_gf4_roundtrip_by_exhaustion() {
        let g4 = f(4);
        let a = Matrix::from_rows(&g4, &[&[1, 1], &[1, 2]]);
        let x = vec![fe(&g4, 0), fe(&g4, 1)];
        let c = a.solve_left(&x).unwrap();
        // Re-multiply to confirm, and exhaustively confirm uniqueness over
        // all 16 GF(4)^2 candidates.
        let mut matches = 0;
        for c0 in 0..4u32 {
            for c1 in 0..4u32 {
                let cand = [fe(&g4, c0), fe(&g4, c1)];
                let mut prod = vec![Fe::ZERO; 2];
                for (r, cv) in cand.iter().enumerate() {
                    for (col, slot) in prod.iter_mut().enumerate() {
                        *slot = g4.add(*slot, g4.mul(*cv, a.get_idx(r, col)));
                    }
                }
                if prod == x {
                    matches += 1;
                    assert_eq!(cand.to_vec(), c);
                }
            }
        }
        assert_eq!(matches, 1);
    }

    #[test]
    fn solve_left_rejects_singular() {
        let g2 = f(2);
        let a = Matrix::from_rows(&g2, &[&[1, 1], &[1, 1]]);
        assert_eq!(a.solve_left(&[Fe(1), Fe(0)]), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn find_l_examples() {
        let g2 = f(2);
        // Used rows x3 = [1,1], x4 = [0,1]; candidate x5 = [1,0] depends on
        // both.
        let used = Matrix::new(g2.clone(), vec![3, 4], vec![1, 3], vec![Fe(1), Fe(1), Fe(0), Fe(1)]).unwrap();
        let l = used.find_l(&[Fe(1), Fe(0)]).unwrap();
        assert_eq!(l.into_iter().collect::<Vec<_>>(), vec![3, 4]);

        // Single used row, candidate equal to it.
        let used = Matrix::new(g2.clone(), vec![4], vec![9], vec![Fe(1)]).unwrap();
        let l = used.find_l(&[Fe(1)]).unwrap();
        assert_eq!(l.into_iter().collect::<Vec<_>>(), vec![4]);

        // Candidate equal to an existing row r gives {r}.
        let g5 = f(5);
        let used = Matrix::new(
            g5.clone(),
            vec![10, 11, 12],
            vec![0, 1, 2],
            vec![
                fe(&g5, 1), fe(&g5, 2), fe(&g5, 3),
                fe(&g5, 0), fe(&g5, 1), fe(&g5, 4),
                fe(&g5, 2), fe(&g5, 0), fe(&g5, 1),
            ],
        )
        .unwrap();
        let l = used.find_l(&used.row(11).unwrap()).unwrap();
        assert_eq!(l.into_iter().collect::<Vec<_>>(), vec![11]);
    }

    #[test]
    fn perfect_matching_examples() {
        let g2 = f(2);
        let id = Matrix::from_rows(&g2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let m = id.perfect_matching().unwrap();
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);

        // Rows x3, x4 over columns y1, y3: x4 only connects y3, forcing the
        // unique matching {(x3, y1), (x4, y3)}.
        let t = Matrix::new(g2.clone(), vec![3, 4], vec![1, 3], vec![Fe(1), Fe(1), Fe(0), Fe(1)]).unwrap();
        let m = t.perfect_matching().unwrap();
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(3, 1), (4, 3)]);

        let sing = Matrix::from_rows(&g2, &[&[1, 1], &[1, 1]]);
        assert_eq!(sing.perfect_matching(), Err(LinalgError::NotFullRank));
    }

    #[test]
    fn perfect_matching_random_full_rank_gf3() {
        use rand::{Rng, SeedableRng};
        let g3 = f(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut found = 0;
        while found < 10 {
            let data: Vec<Fe> = (0..25).map(|_| fe(&g3, rng.gen_range(0..3))).collect();
            let m = Matrix::new(g3.clone(), (0..5).collect(), (10..15).collect(), data).unwrap();
            if !m.is_full_rank() {
                continue;
            }
            found += 1;
            let matching = m.perfect_matching().unwrap();
            assert_eq!(matching.len(), 5);
            let mut rows_seen = std::collections::BTreeSet::new();
            let mut cols_seen = std::collections::BTreeSet::new();
            for (r, c) in matching.pairs() {
                assert!(rows_seen.insert(r));
                assert!(cols_seen.insert(c));
                assert!(!m.get(r, c).unwrap().is_zero());
            }
            // Independent check: some support permutation exists (exhaustive
            // over 5! orderings).
            let perm_exists = {
                let idx: Vec<usize> = (0..5).collect();
                permutations(&idx).into_iter().any(|perm| {
                    perm.iter().enumerate().all(|(r, &c)| !m.get_idx(r, c).is_zero())
                })
            };
            assert!(perm_exists);
        }
    }

    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn matrix_product_and_row_vec() {
        let g4 = f(4);
        let a = Matrix::new(g4.clone(), vec![0, 1], vec![5, 6], vec![Fe(1), Fe(2), Fe(0), Fe(1)]).unwrap();
        let b = Matrix::new(g4.clone(), vec![5, 6], vec![8, 9], vec![Fe(1), Fe(1), Fe(3), Fe(0)]).unwrap();
        let ab = a.mul(&b).unwrap();
        // [1 2] [1 1]   [1+2*3  1]   [1^(2*3) 1]
        // [0 1] [3 0] = [3      0]
        let expect_00 = g4.add(Fe(1), g4.mul(Fe(2), Fe(3)));
        assert_eq!(ab.get_idx(0, 0), expect_00);
        assert_eq!(ab.get_idx(0, 1), Fe(1));
        assert_eq!(ab.get_idx(1, 0), Fe(3));
        assert_eq!(ab.get_idx(1, 1), Fe(0));

        let xv = a.row_vec_mul(&[Fe(1), Fe(1)]).unwrap();
        assert_eq!(xv, vec![Fe(1), g4.add(Fe(2), Fe(1))]);
    }
}
