//! Multiqubit Pauli strings: parsing, dense matrices, measurement orders and
//! Pauli-basis decomposition.
//!
//! Qubit ordering: the leftmost letter of a label is site 1 and the most
//! significant tensor factor, so `"XI"` is `σx ⊗ 1` and acts on the high bit
//! of the computational-basis index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, ensure_square, is_power_of_two, CMatrix, ZERO};

/// Default cap on the number of qubits for which dense matrices are built.
pub const DEFAULT_MAX_QUBITS: usize = 6;

/// Imaginary residue above which a Pauli coefficient is rejected.
const COEFF_IMAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(ch: char) -> Option<Pauli> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Matrix element `⟨row|σ|col⟩` for single-qubit bits.
    fn element(self, row: usize, col: usize) -> Complex64 {
        match (self, row, col) {
            (Pauli::I, r, c) if r == c => Complex64::new(1.0, 0.0),
            (Pauli::X, r, c) if r != c => Complex64::new(1.0, 0.0),
            (Pauli::Y, 0, 1) => Complex64::new(0.0, -1.0),
            (Pauli::Y, 1, 0) => Complex64::new(0.0, 1.0),
            (Pauli::Z, 0, 0) => Complex64::new(1.0, 0.0),
            (Pauli::Z, 1, 1) => Complex64::new(-1.0, 0.0),
            _ => ZERO,
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

/// A length-`n` word over `{I, X, Y, Z}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    symbols: Vec<Pauli>,
}

impl PauliString {
    pub fn new(symbols: Vec<Pauli>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Self { symbols })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            symbols: vec![Pauli::I; n.max(1)],
        }
    }

    /// The string whose base-4 digits (site 1 most significant, `I,X,Y,Z = 0..3`) spell `index`.
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut symbols = vec![Pauli::I; n];
        for slot in symbols.iter_mut().rev() {
            *slot = Pauli::ALL[index % 4];
            index /= 4;
        }
        Self { symbols }
    }

    pub fn num_qubits(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Pauli] {
        &self.symbols
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Nonzero entries `(row, col, value)`; a Pauli string has exactly one per row.
    pub fn entries(&self) -> Vec<(usize, usize, Complex64)> {
        let n = self.num_qubits();
        let d = 1usize << n;
        let mut flip = 0usize;
        for (k, p) in self.symbols.iter().enumerate() {
            if p.flips() {
                flip |= 1 << (n - 1 - k);
            }
        }
        (0..d)
            .map(|row| {
                let col = row ^ flip;
                let mut value = Complex64::new(1.0, 0.0);
                for (k, p) in self.symbols.iter().enumerate() {
                    let shift = n - 1 - k;
                    value *= p.element((row >> shift) & 1, (col >> shift) & 1);
                }
                (row, col, value)
            })
            .collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.symbols {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pauli(s)
    }
}

/// Parses a label such as `"XIZY"`; lowercase letters are accepted.
pub fn parse_pauli(label: &str) -> Result<PauliString> {
    if label.is_empty() {
        return Err(Error::EmptyLabel);
    }
    let symbols = label
        .chars()
        .enumerate()
        .map(|(position, symbol)| {
            Pauli::from_char(symbol).ok_or(Error::InvalidSymbol { symbol, position })
        })
        .collect::<Result<Vec<_>>>()?;
    PauliString::new(symbols)
}

pub fn pauli_matrix(p: &PauliString) -> Result<CMatrix> {
    pauli_matrix_with_limit(p, DEFAULT_MAX_QUBITS)
}

pub fn pauli_matrix_with_limit(p: &PauliString, max_qubits: usize) -> Result<CMatrix> {
    let n = p.num_qubits();
    if n > max_qubits {
        return Err(Error::DimensionTooLarge {
            qubits: n,
            limit: max_qubits,
        });
    }
    let d = 1usize << n;
    let mut m = CMatrix::zeros(d, d);
    for (r, col, v) in p.entries() {
        m[(r, col)] = v;
    }
    Ok(m)
}

/// Every non-identity string on `n` qubits, grouped by ascending weight, each
/// weight block shuffled by a generator seeded with `seed`.
pub fn hierarchical_order(n: usize, seed: u64) -> Vec<PauliString> {
    let mut blocks: Vec<Vec<PauliString>> = vec![Vec::new(); n + 1];
    for index in 1..(1usize << (2 * n)) {
        let p = PauliString::from_index(n, index);
        blocks[p.weight()].push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity((1usize << (2 * n)) - 1);
    for mut block in blocks.into_iter().skip(1) {
        block.shuffle(&mut rng);
        order.extend(block);
    }
    order
}

/// `M = Σ h_P P` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    pub n: usize,
    pub terms: BTreeMap<PauliString, f64>,
}

impl PauliDecomposition {
    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = 1usize << self.n;
        let mut m = CMatrix::zeros(d, d);
        for (p, &h) in &self.terms {
            for (r, col, v) in p.entries() {
                m[(r, col)] += v * h;
            }
        }
        m
    }
}

/// Coefficients `tr(M P) / 2^n` for every string, dropping exact zeros.
pub fn pauli_decompose(m: &CMatrix) -> Result<PauliDecomposition> {
    let d = ensure_square(m)?;
    if !is_power_of_two(d) {
        return Err(Error::NotPowerOfTwoDimension(d));
    }
    ensure_hermitian(m, 1e-10)?;
    let n = d.trailing_zeros() as usize;
    let mut terms = BTreeMap::new();
    for index in 0..(1usize << (2 * n)) {
        let p = PauliString::from_index(n, index);
        let mut acc = ZERO;
        for (r, col, v) in p.entries() {
            acc += v * m[(col, r)];
        }
        let coeff = acc / d as f64;
        if coeff.im.abs() > COEFF_IMAG_TOL {
            return Err(Error::NotHermitian(coeff.im.abs()));
        }
        if coeff.re != 0.0 && coeff.re.abs() > 1e-15 {
            terms.insert(p, coeff.re);
        }
    }
    Ok(PauliDecomposition { n, terms })
}

/// `Re tr(ρ P)`.
pub fn expectation(rho: &CMatrix, p: &PauliString) -> Result<f64> {
    let d = 1usize << p.num_qubits();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.nrows(),
        });
    }
    Ok(p
        .entries()
        .into_iter()
        .map(|(r, col, v)| (v * rho[(col, r)]).re)
        .sum())
}
