//! Smith normal form over ℤ and classification of finitely generated
//! abelian groups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::tree_model::Presentation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    Dimension { expected: usize, found: usize },
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, MatrixError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MatrixError::Dimension { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: r, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
        .expect("ragged rows")
    }

    /// Reads `ROWS COLS` followed by `ROWS` lines of `COLS` integers.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_ints = |line: usize, l: &str| -> Result<Vec<BigInt>, MatrixError> {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>().map_err(|_| MatrixError::Parse {
                        line,
                        message: format!("`{tok}` is not an integer"),
                    })
                })
                .collect()
        };
        let (hline, header) = lines
            .next()
            .ok_or(MatrixError::Parse { line: 1, message: "missing `ROWS COLS` header".into() })?;
        let dims = parse_ints(hline, header)?;
        let to_usize = |x: &BigInt| {
            usize::try_from(x).map_err(|_| MatrixError::Parse {
                line: hline,
                message: "dimensions must be nonnegative".into(),
            })
        };
        let (r, c) = match dims.as_slice() {
            [r, c] => (to_usize(r)?, to_usize(c)?),
            _ => {
                return Err(MatrixError::Parse { line: hline, message: "expected `ROWS COLS`".into() })
            }
        };
        let mut rows = Vec::with_capacity(r);
        for (line, l) in lines {
            if rows.len() == r {
                return Err(MatrixError::Parse { line, message: format!("more than {r} rows") });
            }
            let row = parse_ints(line, l)?;
            if row.len() != c {
                return Err(MatrixError::Parse {
                    line,
                    message: format!("expected {c} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != r {
            return Err(MatrixError::Dimension { expected: r * c, found: rows.len() * c });
        }
        Self::from_rows(rows, c)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `U·A·V = S` with `U`, `V` unimodular and `S` in Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Re-checks `U·A·V = S` and the shape of `S` by exact arithmetic.
    pub fn certifies(&self, a: &IntMatrix) -> bool {
        if self.u.mul(a).mul(&self.v) != self.s {
            return false;
        }
        for i in 0..self.s.rows {
            for j in 0..self.s.cols {
                if i != j && !self.s[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let d = self.diagonal();
        let chain = d.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        chain
            && d.iter().all(|x| !x.is_negative())
            && self.u.det().abs().is_one()
            && self.v.det().abs().is_one()
    }
}

/// Pivot on the least nonzero absolute value of the trailing submatrix
/// (ties: lowest row, then lowest column), clear its row and column by
/// floor division, and repair divisibility by adding an offending row into
/// the pivot row.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &s[(i, j)];
                    if !x.is_zero() && pivot.is_none_or(|(pi, pj)| x.abs() < s[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                let d = SmithDecomposition { s, u, v };
                debug_assert_eq!(d.u.mul(a).mul(&d.v), d.s);
                return d;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !s[(i, t)].is_zero() {
                    let q = -s[(i, t)].div_floor(&p);
                    s.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..n {
                if !s[(t, j)].is_zero() {
                    let q = -s[(t, j)].div_floor(&p);
                    s.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    let d = SmithDecomposition { s, u, v };
    debug_assert_eq!(d.u.mul(a).mul(&d.v), d.s);
    d
}


/// `ℤ^free_rank × ℤ_{t_1} × … × ℤ_{t_k}` with `t_1 | t_2 | … | t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn from_smith(d: &SmithDecomposition) -> Self {
        let diag = d.diagonal();
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        AbelianInvariants {
            torsion: diag.into_iter().filter(|x| *x > BigInt::one()).collect(),
            free_rank: d.s.cols - nonzero,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ_{t}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" × "))
        }
    }
}

/// Exponent-sum matrix of a presentation, one row per relator.
pub fn relation_matrix(pres: &Presentation) -> IntMatrix {
    let n = pres.generators.len();
    let rows = pres.relators.iter().map(|r| r.exponent_sums(n)).collect();
    IntMatrix::from_rows(rows, n).expect("exponent sums have one entry per generator")
}

pub fn abelianization(pres: &Presentation) -> AbelianInvariants {
    subgroup_matrix_invariants(&relation_matrix(pres))
}

/// Abelian group on `rows.cols()` implicit generators with the given relation rows.
pub fn subgroup_matrix_invariants(rows: &IntMatrix) -> AbelianInvariants {
    AbelianInvariants::from_smith(&smith_normal_form(rows))
}

/// Rewrites relation rows in terms of the powers `y_j = x_j^{e_j}`.
///
/// Each row is multiplied by the least positive integer making every entry
/// divisible by the matching `e_j`, then divided through.
pub fn restrict_to_power_subgroup(a: &IntMatrix, exponents: &[BigInt]) -> IntMatrix {
    assert_eq!(a.cols, exponents.len());
    let mut out = a.clone();
    for i in 0..a.rows {
        let mut m = BigInt::one();
        for (x, e) in a.row(i).iter().zip(exponents) {
            m = m.lcm(&(e / e.gcd(x)));
        }
        for (j, e) in exponents.iter().enumerate() {
            out[(i, j)] = &a[(i, j)] * &m / e;
        }
    }
    out
}
