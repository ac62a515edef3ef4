//! Simplex encoding of q-ary symbols into complex root-of-unity vectors.
//!
//! A symbol x in [0, q) maps to the (q-1)-vector with component
//! omega^(x*alpha) for alpha = 1..q-1, omega = e^(2*pi*i/q). The exponent is
//! the plain integer product of labels; field structure enters only through
//! the entries being encoded. The payoff is the inner-product identity
//! `<phi(x), phi(y)> = q-1 if x = y, else -1`, which turns Hamming distances
//! into Euclidean norms.

use num_complex::Complex64;

use crate::codes::LinearCode;
use crate::error::{Error, Result};

/// Entry-count cap for encoded matrices.
pub const MATRIX_ENTRY_BUDGET: u64 = 1 << 26;

/// Near-integer snap tolerance for inner products.
pub const SNAP_TOL: f64 = 1e-9;

/// Dense complex matrix, column-major (encoded codes are consumed column by
/// column when forming Gram matrices).
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        let entries = rows as u64 * cols as u64;
        if entries > MATRIX_ENTRY_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "{rows} x {cols} matrix exceeds {MATRIX_ENTRY_BUDGET} entries"
            )));
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.rows + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[col * self.rows + row] = v;
    }

    pub fn col(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn col_mut(&mut self, col: usize) -> &mut [Complex64] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Interchange format: header `rows cols`, then row-major `re im` pairs.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let mut line = String::new();
            for c in 0..self.cols {
                let z = self.get(r, c);
                if c > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{:e} {:e}", z.re, z.im));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| -> Result<&str> {
            tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))
        };
        let rows: usize = next("rows")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad rows: {e}")))?;
        let cols: usize = next("cols")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad cols: {e}")))?;
        let mut m = Self::zeros(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                let re: f64 = next("re")?
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad re: {e}")))?;
                let im: f64 = next("im")?
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad im: {e}")))?;
                m.set(r, c, Complex64::new(re, im));
            }
        }
        Ok(m)
    }
}

/// A dense grid of q-ary labels (row-major); the input shape for phi_matrix.
#[derive(Debug, Clone)]
pub struct LabelMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u16>,
}

impl LabelMatrix {
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.data[row * self.cols + col]
    }
}

/// omega^j for j in [0, q), precomputed from the closed form so repeated
/// encodings do not accumulate argument error.
pub fn roots_of_unity(q: u16) -> Vec<Complex64> {
    (0..q)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / q as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

fn check_label(x: u16, q: u16) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    if x >= q {
        return Err(Error::LabelOutOfRange { label: x, q });
    }
    Ok(())
}

/// phi(x) in C^(q-1): component alpha = omega^(x*alpha), alpha = 1..q-1.
pub fn phi_symbol(x: u16, q: u16) -> Result<Vec<Complex64>> {
    check_label(x, q)?;
    let roots = roots_of_unity(q);
    Ok(phi_symbol_with(x, q, &roots))
}

#[inline]
fn phi_symbol_with(x: u16, q: u16, roots: &[Complex64]) -> Vec<Complex64> {
    (1..q)
        .map(|alpha| roots[(x as usize * alpha as usize) % q as usize])
        .collect()
}

/// <phi(x), phi(y)>, snapped to the exact integer (q-1 or -1).
pub fn simplex_inner(x: u16, y: u16, q: u16) -> Result<f64> {
    check_label(x, q)?;
    check_label(y, q)?;
    let px = phi_symbol(x, q)?;
    let py = phi_symbol(y, q)?;
    let ip: Complex64 = px.iter().zip(&py).map(|(a, b)| a * b.conj()).sum();
    Ok(snap(ip.re))
}

/// Snap v to the nearest integer when within SNAP_TOL; downstream strict
/// comparisons on distances rely on this.
pub fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= SNAP_TOL {
        r
    } else {
        v
    }
}

/// Coordinate-wise encoding of a q-ary word into C^(n(q-1)).
pub fn phi_vector(v: &[u16], q: u16) -> Result<Vec<Complex64>> {
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    let roots = roots_of_unity(q);
    let mut out = Vec::with_capacity(v.len() * (q as usize - 1));
    for &x in v {
        check_label(x, q)?;
        out.extend(phi_symbol_with(x, q, &roots));
    }
    Ok(out)
}

/// Entry-wise encoding: each label becomes a (q-1)-block stacked in its
/// column, so an r x c label grid becomes an r(q-1) x c complex matrix.
pub fn phi_matrix(m: &LabelMatrix, q: u16) -> Result<ComplexMatrix> {
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    let block = q as usize - 1;
    let mut out = ComplexMatrix::zeros(m.rows * block, m.cols)?;
    let roots = roots_of_unity(q);
    for c in 0..m.cols {
        for r in 0..m.rows {
            let x = m.get(r, c);
            check_label(x, q)?;
            for alpha in 1..q as usize {
                out.set(
                    r * block + alpha - 1,
                    c,
                    roots[(x as usize * alpha) % q as usize],
                );
            }
        }
    }
    Ok(out)
}

/// phi(C): columns indexed by messages in label order.
pub fn phi_code(code: &LinearCode) -> Result<ComplexMatrix> {
    let q = code.spec().q();
    let block = q as usize - 1;
    let mut out = ComplexMatrix::zeros(code.n() * block, code.len())?;
    let roots = roots_of_unity(q);
    for (c, word) in code.codewords.iter().enumerate() {
        let col = out.col_mut(c);
        for (r, &x) in word.iter().enumerate() {
            for alpha in 1..q as usize {
                col[r * block + alpha - 1] = roots[(x as usize * alpha) % q as usize];
            }
        }
    }
    Ok(out)
}

/// Average pairwise distance of L words via the norm identity
/// `(L^2 (q-1) n - ||sum phi(c_i)||^2) / (q L (L-1) n)`.
pub fn avg_dist_via_norm<W: AsRef<[u16]>>(words: &[W], q: u16) -> Result<f64> {
    let l = words.len();
    if l < 2 {
        return Err(Error::InvalidParameter("need at least 2 words".into()));
    }
    let n = words[0].as_ref().len();
    let mut sum = vec![Complex64::new(0.0, 0.0); n * (q as usize - 1)];
    for w in words {
        let w = w.as_ref();
        if w.len() != n {
            return Err(Error::LengthMismatch(w.len(), n));
        }
        for (acc, z) in sum.iter_mut().zip(phi_vector(w, q)?) {
            *acc += z;
        }
    }
    let norm_sq: f64 = sum.iter().map(|z| z.norm_sqr()).sum();
    let l = l as f64;
    let nf = n as f64;
    let qf = q as f64;
    Ok((l * l * (qf - 1.0) * nf - norm_sq) / (qf * l * (l - 1.0) * nf))
}
