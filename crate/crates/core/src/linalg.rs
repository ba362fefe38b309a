//! Exact linear algebra over the rationals.
//!
//! Ranks, nullspaces and membership tests for the sparse matrices produced
//! by the rest of the crate. Everything is computed by fraction-free
//! elimination over big integers after clearing denominators row by row;
//! there is no floating point anywhere.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by `num`).
pub type Rational = BigRational;
pub type Int = BigInt;

/// Sparse rational matrix. Rows and columns may be zero; no zero entries are
/// stored. Values are immutable once built, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    // row-major, each row sorted by column index
    data: Vec<Vec<(usize, Rational)>>,
}

/// Sparse rational vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    len: usize,
    entries: Vec<(usize, Rational)>,
}

impl Vector {
    pub fn zero(len: usize) -> Self {
        Vector {
            len,
            entries: Vec::new(),
        }
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(len: usize, iter: I) -> Self {
        let mut entries: Vec<(usize, Rational)> =
            iter.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        entries.sort_by_key(|&(i, _)| i);
        for &(i, _) in &entries {
            assert!(i < len, "vector index {i} out of range {len}");
        }
        entries.dedup_by(|a, b| {
            if a.0 == b.0 {
                let v = std::mem::replace(&mut b.1, Rational::zero());
                b.1 = v + std::mem::take(&mut a.1);
                true
            } else {
                false
            }
        });
        entries.retain(|(_, v)| !v.is_zero());
        Vector { len, entries }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        Vector::from_entries(
            values.len(),
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.clone()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |&(c, _)| c) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.len];
        for (i, v) in self.iter() {
            out[i] = v.clone();
        }
        out
    }
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != 0 {
                    m.set(i, j, Rational::from_integer(BigInt::from(*v)));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        let r = &mut self.data[row];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(pos) => {
                if value.is_zero() {
                    r.remove(pos);
                } else {
                    r[pos].1 = value;
                }
            }
            Err(pos) => {
                if !value.is_zero() {
                    r.insert(pos, (col, value));
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        match self.data[row].binary_search_by_key(&col, |&(c, _)| c) {
            Ok(pos) => self.data[row][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Writes a whole row at once; entries need not be sorted.
    pub fn set_row<I: IntoIterator<Item = (usize, Rational)>>(&mut self, row: usize, iter: I) {
        let mut r: Vec<(usize, Rational)> =
            iter.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        r.sort_by_key(|&(c, _)| c);
        for &(c, _) in &r {
            assert!(c < self.cols, "column {c} out of range {}", self.cols);
        }
        self.data[row] = r;
    }

    pub fn row(&self, row: usize) -> &[(usize, Rational)] {
        &self.data[row]
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, Rational> =
                std::collections::BTreeMap::new();
            for (k, v) in row {
                for (c, w) in &other.data[*k] {
                    let e = acc.entry(*c).or_insert_with(Rational::zero);
                    *e += v * w;
                }
            }
            out.data[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let dense = v.to_dense();
        let mut out = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = Rational::zero();
            for (c, w) in row {
                if !dense[*c].is_zero() {
                    acc += w * &dense[*c];
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        Ok(Vector::from_entries(self.rows, out))
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        Echelon::reduce(self, None).pivots.len()
    }

    /// Basis of the right nullspace. Its length is always
    /// `cols - rank`; for an empty matrix this is the standard basis.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let ech = Echelon::reduce(self, None);
        let pivot_cols: std::collections::BTreeSet<usize> =
            ech.pivots.iter().map(|p| p.col).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            basis.push(ech.back_substitute_kernel(free, self.cols));
        }
        basis
    }

    /// Whether `v` lies in the column span, decided exactly.
    pub fn in_image(&self, v: &Vector) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }

    /// One exact solution of `self * x = v` (free variables set to zero),
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, v: &Vector) -> Result<Option<Vector>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, right-hand side has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let ech = Echelon::reduce(self, Some(v));
        Ok(ech.back_substitute_solution(self.cols))
    }
}

/// A pivot produced by the elimination, in selection order.
struct Pivot {
    row: usize, // index into Echelon::rows
    col: usize,
}

/// Echelon data from fraction-free integer elimination.
///
/// Pivot columns are chosen structurally sparsest first (ties to the lowest
/// index); within a column the sparsest row wins. Updated rows are divided by
/// their content so entries stay small. The optional right-hand side is
/// carried through the same row operations in the virtual column `cols`.
struct Echelon {
    rows: Vec<Vec<(usize, Int)>>,
    pivots: Vec<Pivot>,
    /// rows left over with support only in the augmented column
    inconsistent: bool,
}

impl Echelon {
    fn reduce(m: &SparseMatrix, rhs: Option<&Vector>) -> Echelon {
        let aug_col = m.cols;
        // Clear denominators per row; kernel and pivot structure are
        // unaffected by row scaling.
        let mut rows: Vec<Vec<(usize, Int)>> = Vec::with_capacity(m.rows);
        for r in 0..m.rows {
            let mut entries: Vec<(usize, Rational)> = m.data[r].clone();
            if let Some(v) = rhs {
                let b = v.get(r);
                if !b.is_zero() {
                    entries.push((aug_col, b));
                }
            }
            if entries.is_empty() {
                continue;
            }
            let mut lcm = Int::one();
            for (_, v) in &entries {
                lcm = lcm.lcm(v.denom());
            }
            let mut row: Vec<(usize, Int)> = entries
                .into_iter()
                .map(|(c, v)| {
                    let scaled = v.numer() * (&lcm / v.denom());
                    (c, scaled)
                })
                .collect();
            reduce_content(&mut row);
            rows.push(row);
        }

        // nonzero count per column over active rows
        let mut col_count = vec![0usize; m.cols];
        let mut active: Vec<bool> = vec![true; rows.len()];
        for row in &rows {
            for (c, _) in row {
                if *c < m.cols {
                    col_count[*c] += 1;
                }
            }
        }

        let mut pivots = Vec::new();
        loop {
            // sparsest eligible pivot column, ties broken by lowest index
            let mut best: Option<(usize, usize)> = None; // (count, col)
            for (c, &cnt) in col_count.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                match best {
                    Some((bc, _)) if cnt >= bc => {}
                    _ => best = Some((cnt, c)),
                }
            }
            let Some((_, pc)) = best else { break };

            // sparsest active row with support in pc, ties to lowest index
            let mut prow: Option<(usize, usize)> = None; // (nnz, row)
            for (r, row) in rows.iter().enumerate() {
                if !active[r] {
                    continue;
                }
                if row.binary_search_by_key(&pc, |&(c, _)| c).is_ok() {
                    let nnz = row.len();
                    match prow {
                        Some((bn, _)) if nnz >= bn => {}
                        _ => prow = Some((nnz, r)),
                    }
                }
            }
            let (_, pr) = prow.expect("column count was positive");

            active[pr] = false;
            for (c, _) in &rows[pr] {
                if *c < m.cols {
                    col_count[*c] -= 1;
                }
            }
            pivots.push(Pivot { row: pr, col: pc });

            let pivot_row = rows[pr].clone();
            let pivot_val = pivot_row
                .iter()
                .find(|&&(c, _)| c == pc)
                .map(|(_, v)| v.clone())
                .unwrap();

            for r in 0..rows.len() {
                if !active[r] {
                    continue;
                }
                let Ok(pos) = rows[r].binary_search_by_key(&pc, |&(c, _)| c) else {
                    continue;
                };
                let row_val = rows[r][pos].1.clone();
                // row <- row * (pivot/g) - pivot_row * (row_val/g)
                let g = pivot_val.gcd(&row_val);
                let a = &pivot_val / &g;
                let b = &row_val / &g;
                for (c, _) in &rows[r] {
                    if *c < m.cols {
                        col_count[*c] -= 1;
                    }
                }
                let updated = row_combine(&rows[r], &a, &pivot_row, &b);
                for (c, _) in &updated {
                    if *c < m.cols {
                        col_count[*c] += 1;
                    }
                }
                rows[r] = updated;
            }
        }

        // Any active row left must have support only in the augmented column.
        let inconsistent = rows
            .iter()
            .enumerate()
            .any(|(r, row)| active[r] && !row.is_empty());

        Echelon {
            rows,
            pivots,
            inconsistent,
        }
    }

    /// Kernel vector for a free column: x[free] = 1, other free columns 0,
    /// pivot entries solved in reverse pivot order. Scaled to integers and
    /// divided by content.
    fn back_substitute_kernel(&self, free: usize, cols: usize) -> Vector {
        let mut x: Vec<Rational> = vec![Rational::zero(); cols];
        x[free] = Rational::one();
        for p in self.pivots.iter().rev() {
            let row = &self.rows[p.row];
            let mut acc = Rational::zero();
            let mut pivot_val = Int::zero();
            for (c, v) in row {
                if *c == p.col {
                    pivot_val = v.clone();
                } else if *c < cols && !x[*c].is_zero() {
                    acc += Rational::from_integer(v.clone()) * &x[*c];
                }
            }
            x[p.col] = -acc / Rational::from_integer(pivot_val);
        }
        integerize(&mut x);
        Vector::from_entries(
            cols,
            x.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect::<Vec<_>>(),
        )
    }

    /// A particular solution with free variables zero, if consistent.
    fn back_substitute_solution(&self, cols: usize) -> Option<Vector> {
        if self.inconsistent {
            return None;
        }
        let mut x: Vec<Rational> = vec![Rational::zero(); cols];
        for p in self.pivots.iter().rev() {
            let row = &self.rows[p.row];
            let mut acc = Rational::zero();
            let mut pivot_val = Int::zero();
            for (c, v) in row {
                if *c == p.col {
                    pivot_val = v.clone();
                } else if *c == cols {
                    // augmented column: constant term
                    acc -= Rational::from_integer(v.clone());
                } else if !x[*c].is_zero() {
                    acc += Rational::from_integer(v.clone()) * &x[*c];
                }
            }
            x[p.col] = -acc / Rational::from_integer(pivot_val);
        }
        Some(Vector::from_entries(
            cols,
            x.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect::<Vec<_>>(),
        ))
    }
}

/// `a*x - b*y` on sorted sparse integer rows.
fn row_combine(
    x: &[(usize, Int)],
    a: &Int,
    y: &[(usize, Int)],
    b: &Int,
) -> Vec<(usize, Int)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                let v = a * vx - b * vy;
                if !v.is_zero() {
                    out.push((*cx, v));
                }
                i += 1;
                j += 1;
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                out.push((*cx, a * vx));
                i += 1;
            }
            (Some(_), Some((cy, vy))) => {
                out.push((*cy, -(b * vy)));
                j += 1;
            }
            (Some((cx, vx)), None) => {
                out.push((*cx, a * vx));
                i += 1;
            }
            (None, Some((cy, vy))) => {
                out.push((*cy, -(b * vy)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    reduce_content(&mut out);
    out
}

/// Divides a row by the gcd of its entries and normalizes the leading sign.
fn reduce_content(row: &mut Vec<(usize, Int)>) {
    if row.is_empty() {
        return;
    }
    let mut g = Int::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Scales a dense rational vector to integers and divides by the content,
/// keeping the sign of the first nonzero entry positive.
fn integerize(x: &mut [Rational]) {
    let mut lcm = Int::one();
    for v in x.iter() {
        if !v.is_zero() {
            lcm = lcm.lcm(v.denom());
        }
    }
    let mut g = Int::zero();
    let mut first_sign = 0i8;
    let mut scaled: Vec<Int> = Vec::with_capacity(x.len());
    for v in x.iter() {
        let s = v.numer() * (&lcm / v.denom());
        if first_sign == 0 && !s.is_zero() {
            first_sign = if s.is_negative() { -1 } else { 1 };
        }
        g = g.gcd(&s);
        scaled.push(s);
    }
    if g.is_zero() {
        return;
    }
    if first_sign < 0 {
        g = -g;
    }
    for (slot, s) in x.iter_mut().zip(scaled) {
        *slot = Rational::from_integer(s / &g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn rat(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    #[test]
    fn rank_of_identity() {
        assert_eq!(SparseMatrix::identity(2).rank(), 2);
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(SparseMatrix::new(3, 4).rank(), 0);
    }

    #[test]
    fn rank_of_proportional_rows() {
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(SparseMatrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_difference_row() {
        let m = SparseMatrix::from_dense(&[vec![1, -1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // spanning (1,1) up to scale
        assert_eq!(v.get(0), v.get(1));
        assert!(!v.get(0).is_zero());
    }

    #[test]
    fn kernel_of_proportional_rows() {
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // spanning (2,-1) up to scale
        assert_eq!(v.get(0), -rat(2) * v.get(1));
    }

    #[test]
    fn kernel_of_empty_matrix_is_standard_basis() {
        let m = SparseMatrix::new(0, 3);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            assert_eq!(v.get(i), rat(1));
            assert_eq!(v.iter().count(), 1);
        }
    }

    #[test]
    fn in_image_identity_and_zero() {
        let id = SparseMatrix::identity(2);
        let v = Vector::from_dense(&[rat(3), rat(-7)]);
        assert!(id.in_image(&v).unwrap());

        let z = SparseMatrix::new(2, 2);
        assert!(!z.in_image(&v).unwrap());
        assert!(z.in_image(&Vector::zero(2)).unwrap());
    }

    #[test]
    fn in_image_scalar_multiple() {
        let mut m = SparseMatrix::new(2, 1);
        m.set(0, 0, rat(1));
        m.set(1, 0, rat(2));
        let v = Vector::from_dense(&[rat(2), rat(4)]);
        assert!(m.in_image(&v).unwrap());
        let w = Vector::from_dense(&[rat(2), rat(5)]);
        assert!(!m.in_image(&w).unwrap());
    }

    #[test]
    fn in_image_dimension_mismatch() {
        let m = SparseMatrix::identity(2);
        let v = Vector::zero(3);
        assert!(matches!(m.in_image(&v), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn solve_returns_exact_solution() {
        let m = SparseMatrix::from_dense(&[vec![2, 1], vec![0, 3]]);
        let v = Vector::from_dense(&[rat(5), rat(6)]);
        let x = m.solve(&v).unwrap().unwrap();
        assert_eq!(m.apply(&x).unwrap(), v);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = SparseMatrix::from_dense(&[
            vec![1, 2, 3, 0],
            vec![0, 1, 1, -1],
            vec![1, 3, 4, -1],
        ]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 4 - m.rank());
        for v in &basis {
            assert!(m.apply(v).unwrap().is_zero());
        }
    }
}
