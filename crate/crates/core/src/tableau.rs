//! Young tableaux over real entries and Robinson–Schensted–Knuth row insertion.
//!
//! Rows are stored top to bottom, each strictly increasing; columns strictly
//! increase downwards. All entries of a tableau are pairwise distinct and
//! finite. Positions handed to callers are 1-based `(row, column)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limit_curves::CurvePoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableauError {
    #[error("entry {0} already present in the tableau")]
    DuplicateEntry(f64),
    #[error("entry {0} is not a finite real")]
    NonFinite(f64),
    #[error("value {0} not found in the tableau")]
    NotFound(f64),
    #[error("({row}, {column}) is not a corner cell")]
    NotACorner { row: usize, column: usize },
    #[error("row {row} is empty or longer than the row above it")]
    BadShape { row: usize },
    #[error("row {row} is not strictly increasing")]
    RowOrder { row: usize },
    #[error("column {column} is not strictly increasing at row {row}")]
    ColumnOrder { row: usize, column: usize },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("insertion index {index} outside 0..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, TableauError>;

/// Weakly decreasing positive row lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Option<Self> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        ok.then_some(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Whether the 1-based cell `(row, column)` can be removed leaving a partition.
    pub fn is_corner(&self, pos: BoxPosition) -> bool {
        let r = pos.row;
        if r == 0 || r > self.0.len() || pos.column != self.0[r - 1] {
            return false;
        }
        r == self.0.len() || self.0[r] < pos.column
    }
}

/// 1-based cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxPosition {
    pub row: usize,
    pub column: usize,
}

impl BoxPosition {
    pub const fn new(row: usize, column: usize) -> Self {
        BoxPosition { row, column }
    }

    /// The cell as a point of the plane: the first coordinate runs along
    /// rows (the column index), the second down columns (the row index).
    /// This is the frame in which the limit curves and `≺` are stated.
    pub fn to_point(self) -> CurvePoint {
        CurvePoint::new(self.column as f64, self.row as f64)
    }

    pub fn prec(self, other: BoxPosition) -> bool {
        self.column <= other.column && self.row >= other.row
    }
}

impl fmt::Display for BoxPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.column)
    }
}

/// Cells touched by one row insertion, one per visited row, top to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BumpingRoute {
    cells: Vec<BoxPosition>,
}

impl BumpingRoute {
    pub fn cells(&self) -> &[BoxPosition] {
        &self.cells
    }

    /// The newly created cell.
    pub fn last(&self) -> BoxPosition {
        *self
            .cells
            .last()
            .expect("a bumping route visits at least one row")
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Deserialize)]
struct RawTableau {
    rows: Vec<Vec<f64>>,
}

/// A Young tableau with distinct real entries.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawTableau")]
pub struct Tableau {
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawTableau> for Tableau {
    type Error = TableauError;

    fn try_from(raw: RawTableau) -> Result<Self> {
        Tableau::from_rows(raw.rows)
    }
}

impl Tableau {
    pub fn new() -> Self {
        Tableau::default()
    }

    /// Validates shape, row and column order, finiteness and distinctness.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() || (r > 0 && row.len() > rows[r - 1].len()) {
                return Err(TableauError::BadShape { row: r + 1 });
            }
            if let Some(&bad) = row.iter().find(|x| !x.is_finite()) {
                return Err(TableauError::NonFinite(bad));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(TableauError::RowOrder { row: r + 1 });
            }
            if r > 0 {
                let above = &rows[r - 1];
                if let Some(c) = (0..row.len()).find(|&c| above[c] >= row[c]) {
                    return Err(TableauError::ColumnOrder {
                        row: r + 1,
                        column: c + 1,
                    });
                }
            }
        }
        let mut all: Vec<f64> = rows.iter().flatten().copied().collect();
        all.sort_by(f64::total_cmp);
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(TableauError::DuplicateEntry(w[0]));
        }
        Ok(Tableau { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition(self.rows.iter().map(Vec::len).collect())
    }

    pub fn first_row_len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().flatten().copied()
    }

    pub fn get(&self, pos: BoxPosition) -> Option<f64> {
        self.rows
            .get(pos.row.checked_sub(1)?)?
            .get(pos.column.checked_sub(1)?)
            .copied()
    }

    pub fn contains(&self, value: f64) -> bool {
        self.find(value).is_some()
    }

    fn find(&self, value: f64) -> Option<BoxPosition> {
        if !value.is_finite() {
            return None;
        }
        for (r, row) in self.rows.iter().enumerate() {
            // first entries increase down the first column
            if row[0] > value {
                break;
            }
            if let Ok(c) =
                row.binary_search_by(|y| y.partial_cmp(&value).expect("entries are finite"))
            {
                return Some(BoxPosition::new(r + 1, c + 1));
            }
        }
        None
    }

    /// Position of the cell holding `value`.
    pub fn locate(&self, value: f64) -> Result<BoxPosition> {
        self.find(value).ok_or(TableauError::NotFound(value))
    }

    /// Row-inserts `x` in place and returns the bumping route.
    pub fn insert(&mut self, x: f64) -> Result<BumpingRoute> {
        self.check_new_entry(x)?;
        let mut cells = Vec::with_capacity(self.rows.len() + 1);
        self.insert_unchecked(x, |cell| cells.push(cell));
        Ok(BumpingRoute { cells })
    }

    /// Functional form of [`Tableau::insert`].
    pub fn inserted(&self, x: f64) -> Result<(Tableau, BumpingRoute)> {
        let mut t = self.clone();
        let route = t.insert(x)?;
        Ok((t, route))
    }

    /// The cell that inserting `x` would create, without modifying the tableau.
    pub fn new_box_position(&self, x: f64) -> Result<BoxPosition> {
        self.check_new_entry(x)?;
        let mut carry = x;
        for (r, row) in self.rows.iter().enumerate() {
            let c = row.partition_point(|&y| y < carry);
            if c == row.len() {
                return Ok(BoxPosition::new(r + 1, c + 1));
            }
            carry = row[c];
        }
        Ok(BoxPosition::new(self.rows.len() + 1, 1))
    }

    fn check_new_entry(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(TableauError::NonFinite(x));
        }
        if self.contains(x) {
            return Err(TableauError::DuplicateEntry(x));
        }
        Ok(())
    }

    /// Row insertion without the distinctness check; `visit` sees every
    /// route cell in order. Callers guarantee `x` is finite and new.
    pub(crate) fn insert_unchecked(&mut self, x: f64, mut visit: impl FnMut(BoxPosition)) {
        let mut carry = x;
        for r in 0.. {
            let Some(row) = self.rows.get_mut(r) else {
                self.rows.push(vec![carry]);
                visit(BoxPosition::new(r + 1, 1));
                return;
            };
            let c = row.partition_point(|&y| y < carry);
            visit(BoxPosition::new(r + 1, c + 1));
            if c == row.len() {
                row.push(carry);
                return;
            }
            carry = std::mem::replace(&mut row[c], carry);
        }
    }

    /// Undoes one row insertion whose route ended at `corner`, returning the
    /// value that was inserted.
    pub fn reverse_insert(&mut self, corner: BoxPosition) -> Result<f64> {
        if !self.shape().is_corner(corner) {
            return Err(TableauError::NotACorner {
                row: corner.row,
                column: corner.column,
            });
        }
        let r = corner.row - 1;
        let mut carry = self.rows[r].pop().expect("corner row is nonempty");
        if self.rows[r].is_empty() {
            self.rows.pop();
        }
        for row in self.rows[..r].iter_mut().rev() {
            // largest entry smaller than the carried value
            let c = row.partition_point(|&y| y < carry) - 1;
            carry = std::mem::replace(&mut row[c], carry);
        }
        Ok(carry)
    }

    /// Functional form of [`Tableau::reverse_insert`].
    pub fn reverse_inserted(&self, corner: BoxPosition) -> Result<(Tableau, f64)> {
        let mut t = self.clone();
        let x = t.reverse_insert(corner)?;
        Ok((t, x))
    }

    /// Applies `f` entrywise. `f` must be strictly increasing on the entries,
    /// otherwise the result fails validation.
    pub fn relabel(&self, f: impl Fn(f64) -> f64) -> Result<Tableau> {
        Tableau::from_rows(
            self.rows
                .iter()
                .map(|row| row.iter().map(|&x| f(x)).collect())
                .collect(),
        )
    }

    /// Appends `value` at the end of row `row` (1-based; `rows + 1` opens a new row).
    fn push_cell(&mut self, row: usize, value: f64) {
        if row > self.rows.len() {
            self.rows.push(vec![value]);
        } else {
            self.rows[row - 1].push(value);
        }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (c, x) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Insertion tableau `P` and recording tableau `Q` of `seq`.
pub fn rsk(seq: &[f64]) -> Result<(Tableau, Tableau)> {
    let mut p = Tableau::new();
    let mut q = Tableau::new();
    for (j, &x) in seq.iter().enumerate() {
        let cell = p.insert(x)?.last();
        q.push_cell(cell.row, (j + 1) as f64);
    }
    Ok((p, q))
}

/// A bijection of `{1, …, n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = TableauError;

    fn try_from(values: Vec<usize>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(TableauError::NotAPermutation(n));
            }
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Inserts the new maximum `len + 1` right after the first `prefix` values.
    pub fn extend(&self, prefix: usize) -> Result<Permutation> {
        let len = self.0.len();
        if prefix > len {
            return Err(TableauError::IndexOutOfRange { index: prefix, len });
        }
        let mut out = Vec::with_capacity(len + 1);
        out.extend_from_slice(&self.0[..prefix]);
        out.push(len + 1);
        out.extend_from_slice(&self.0[prefix..]);
        Ok(Permutation(out))
    }

    pub fn as_reals(&self) -> Vec<f64> {
        self.0.iter().map(|&v| v as f64).collect()
    }

    pub fn rsk(&self) -> (Tableau, Tableau) {
        rsk(&self.as_reals()).expect("permutation entries are distinct")
    }
}

/// Free-function spelling of [`Permutation::inverse`] for raw one-line vectors.
pub fn inverse_permutation(p: &[usize]) -> Result<Vec<usize>> {
    Ok(Permutation::new(p.to_vec())?.inverse().0)
}

/// Free-function spelling of [`Permutation::extend`].
pub fn extend_permutation(p: &[usize], prefix: usize) -> Result<Vec<usize>> {
    Ok(Permutation::new(p.to_vec())?.extend(prefix)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[f64]]) -> Tableau {
        Tableau::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn cells(v: &[(usize, usize)]) -> Vec<BoxPosition> {
        v.iter().map(|&(r, c)| BoxPosition::new(r, c)).collect()
    }

    #[test]
    fn insert_into_empty() {
        let (out, route) = Tableau::new().inserted(0.7).unwrap();
        assert_eq!(out, t(&[&[0.7]]));
        assert_eq!(route.cells(), cells(&[(1, 1)]));
    }

    #[test]
    fn insert_bumps_down_three_rows() {
        let (out, route) = t(&[&[1.0, 2.0], &[3.0]]).inserted(1.5).unwrap();
        assert_eq!(out, t(&[&[1.0, 1.5], &[2.0], &[3.0]]));
        assert_eq!(route.cells(), cells(&[(1, 2), (2, 1), (3, 1)]));
    }

    #[test]
    fn insert_appends_at_row_end() {
        let (out, route) = t(&[&[1.0, 2.0], &[3.0]]).inserted(4.0).unwrap();
        assert_eq!(out, t(&[&[1.0, 2.0, 4.0], &[3.0]]));
        assert_eq!(route.cells(), cells(&[(1, 3)]));
    }

    #[test]
    fn insert_rejects_duplicates_in_any_row() {
        let tab = t(&[&[1.0, 3.0], &[2.0]]);
        assert_eq!(
            tab.inserted(2.0).unwrap_err(),
            TableauError::DuplicateEntry(2.0)
        );
        assert_eq!(
            tab.inserted(3.0).unwrap_err(),
            TableauError::DuplicateEntry(3.0)
        );
        assert!(matches!(
            tab.inserted(f64::NAN),
            Err(TableauError::NonFinite(_))
        ));
    }

    #[test]
    fn rsk_small_examples() {
        let (p, q) = rsk(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(p, t(&[&[1.0, 2.0], &[3.0]]));
        assert_eq!(q, t(&[&[1.0, 3.0], &[2.0]]));
        assert_eq!(p.shape(), q.shape());

        let (p, q) = rsk(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p, t(&[&[1.0, 2.0, 3.0]]));
        assert_eq!(q, p);

        let (p, q) = rsk(&[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(p, t(&[&[1.0], &[2.0], &[3.0]]));
        assert_eq!(q, p);

        assert!(rsk(&[0.5, 0.2, 0.5]).is_err());
    }

    #[test]
    fn locate_and_shape() {
        let tab = t(&[&[1.0, 2.0], &[3.0]]);
        assert_eq!(tab.locate(3.0).unwrap(), BoxPosition::new(2, 1));
        assert_eq!(tab.locate(2.0).unwrap(), BoxPosition::new(1, 2));
        assert_eq!(tab.locate(5.0).unwrap_err(), TableauError::NotFound(5.0));
        assert_eq!(tab.shape().parts(), &[2, 1]);
        assert_eq!(Tableau::new().shape().parts(), &[] as &[usize]);
    }

    #[test]
    fn reverse_insert_examples() {
        let (back, x) = t(&[&[1.0, 1.5], &[2.0], &[3.0]])
            .reverse_inserted(BoxPosition::new(3, 1))
            .unwrap();
        assert_eq!(back, t(&[&[1.0, 2.0], &[3.0]]));
        assert_eq!(x, 1.5);

        let (back, x) = t(&[&[0.25]])
            .reverse_inserted(BoxPosition::new(1, 1))
            .unwrap();
        assert!(back.is_empty());
        assert_eq!(x, 0.25);

        let err = t(&[&[1.0, 2.0], &[3.0]]).reverse_inserted(BoxPosition::new(1, 1));
        assert_eq!(
            err.unwrap_err(),
            TableauError::NotACorner { row: 1, column: 1 }
        );
    }

    #[test]
    fn from_rows_validation() {
        assert!(matches!(
            Tableau::from_rows(vec![vec![1.0], vec![2.0, 3.0]]),
            Err(TableauError::BadShape { row: 2 })
        ));
        assert!(matches!(
            Tableau::from_rows(vec![vec![2.0, 1.0]]),
            Err(TableauError::RowOrder { row: 1 })
        ));
        assert!(matches!(
            Tableau::from_rows(vec![vec![1.0, 2.0], vec![0.5]]),
            Err(TableauError::ColumnOrder { row: 2, column: 1 })
        ));
        assert!(matches!(
            Tableau::from_rows(vec![vec![1.0, 2.0], vec![2.0]]),
            Err(TableauError::DuplicateEntry(_))
        ));
    }

    #[test]
    fn json_format() {
        let tab: Tableau = serde_json::from_str(r#"{"rows": [[1, 2], [3]]}"#).unwrap();
        assert_eq!(tab, t(&[&[1.0, 2.0], &[3.0]]));
        assert_eq!(
            serde_json::to_string(&tab).unwrap(),
            r#"{"rows":[[1.0,2.0],[3.0]]}"#
        );
        assert!(serde_json::from_str::<Tableau>(r#"{"rows": [[2, 1]]}"#).is_err());
    }

    #[test]
    fn permutation_basics() {
        assert_eq!(inverse_permutation(&[2, 3, 1]).unwrap(), vec![3, 1, 2]);
        assert_eq!(inverse_permutation(&[1, 2, 3]).unwrap(), vec![1, 2, 3]);
        assert!(inverse_permutation(&[1, 1, 3]).is_err());
        assert!(inverse_permutation(&[0, 1]).is_err());
        assert_eq!(extend_permutation(&[1, 2], 1).unwrap(), vec![1, 3, 2]);
        assert_eq!(extend_permutation(&[2, 1], 0).unwrap(), vec![3, 2, 1]);
        assert!(extend_permutation(&[2, 1], 3).is_err());
    }

    #[test]
    fn insertion_equals_recording_of_inverse_small() {
        let p = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(p.rsk().0, p.inverse().rsk().1);
    }

    #[test]
    fn new_box_position_matches_route_end() {
        let tab = t(&[&[1.0, 2.0, 5.0], &[3.0, 4.0], &[6.0]]);
        for x in [0.5, 1.5, 2.5, 4.5, 5.5, 7.0] {
            let (_, route) = tab.inserted(x).unwrap();
            assert_eq!(tab.new_box_position(x).unwrap(), route.last());
        }
        assert_eq!(
            Tableau::new().new_box_position(0.3).unwrap(),
            BoxPosition::new(1, 1)
        );
        assert_eq!(tab.new_box_position(9.0).unwrap(), BoxPosition::new(1, 4));
    }
}
