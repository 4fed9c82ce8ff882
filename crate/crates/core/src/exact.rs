//! Exact arithmetic in the cyclotomic ring `Q(ζ_N)` for `N` a power of two,
//! and exact 2x2 unitary matrices over it.
//!
//! A [`CycNumber`] stores `N/2` rational coefficients of the powers
//! `ζ^0 .. ζ^(N/2-1)`, reduced with `ζ^(N/2) = -1`. Since `x^(N/2) + 1` is
//! the minimal polynomial of `ζ_N`, that basis is linearly independent and
//! structural equality is semantic equality. This is what lets the decision
//! diagram layer hash-cons matrices without any tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Errors raised by the arithmetic layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("ring order {0} is not a power of two >= 8")]
    InvalidOrder(u64),
    #[error("ring order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("unsupported angle {num}/{den}: denominator must be a positive power of two")]
    UnsupportedAngle { num: i64, den: i64 },
    #[error("angle {angle}·π needs ring order {needed}, context has {order}")]
    AngleOutOfRing {
        angle: DyadicAngle,
        needed: u32,
        order: u32,
    },
    #[error("matrix is not unitary")]
    NotUnitary,
}

/// A rotation angle `(num / 2^log2_den) · π`, stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicAngle {
    num: i64,
    log2_den: u32,
}

impl DyadicAngle {
    /// Builds `num/den · π`; `den` must be a positive power of two.
    pub fn new(num: i64, den: i64) -> Result<Self, ArithError> {
        if den <= 0 || (den & (den - 1)) != 0 {
            return Err(ArithError::UnsupportedAngle { num, den });
        }
        let mut num = num;
        let mut log2_den = den.trailing_zeros();
        while log2_den > 0 && num % 2 == 0 {
            num /= 2;
            log2_den -= 1;
        }
        Ok(DyadicAngle { num, log2_den })
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        1i64 << self.log2_den
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_den
    }

    pub fn neg(&self) -> Self {
        DyadicAngle {
            num: -self.num,
            log2_den: self.log2_den,
        }
    }

    /// Smallest ring order that contains `e^{iθ}` for this angle.
    pub fn required_order(&self) -> u32 {
        Ring::MIN_ORDER.max(1u32 << (self.log2_den + 1))
    }
}

impl fmt::Display for DyadicAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.denominator())
    }
}

/// Names of the built-in single-qubit unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    I,
    X,
    V,
    /// Adjoint (and inverse) of `V`.
    VDagger,
    /// Phase rotation `diag(1, e^{iθ})`.
    R(DyadicAngle),
}

impl GateKind {
    pub fn adjoint(&self) -> GateKind {
        match *self {
            GateKind::V => GateKind::VDagger,
            GateKind::VDagger => GateKind::V,
            GateKind::R(a) => GateKind::R(a.neg()),
            other => other,
        }
    }

    pub fn required_order(&self) -> u32 {
        match self {
            GateKind::R(a) => a.required_order(),
            _ => Ring::MIN_ORDER,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::I => f.write_str("I"),
            GateKind::X => f.write_str("X"),
            GateKind::V => f.write_str("V"),
            GateKind::VDagger => f.write_str("V+"),
            GateKind::R(a) => write!(f, "R({a})"),
        }
    }
}

/// Arithmetic context: the cyclotomic order `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    order: u32,
}

impl Default for Ring {
    fn default() -> Self {
        Ring {
            order: Self::MIN_ORDER,
        }
    }
}

impl Ring {
    pub const MIN_ORDER: u32 = 8;

    pub fn new(order: u64) -> Result<Self, ArithError> {
        if order < Self::MIN_ORDER as u64 || !order.is_power_of_two() || order > 1 << 30 {
            return Err(ArithError::InvalidOrder(order));
        }
        Ok(Ring {
            order: order as u32,
        })
    }

    /// Smallest ring accommodating every gate in `kinds`.
    pub fn for_gates<'a>(kinds: impl IntoIterator<Item = &'a GateKind>) -> Ring {
        let order = kinds
            .into_iter()
            .map(GateKind::required_order)
            .fold(Self::MIN_ORDER, u32::max);
        Ring { order }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn half(&self) -> usize {
        (self.order / 2) as usize
    }

    pub fn zero(&self) -> CycNumber {
        CycNumber {
            order: self.order,
            coeffs: vec![BigRational::zero(); self.half()].into_boxed_slice(),
        }
    }

    pub fn one(&self) -> CycNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, r: BigRational) -> CycNumber {
        let mut z = self.zero();
        z.coeffs[0] = r;
        z
    }

    pub fn integer(&self, n: i64) -> CycNumber {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycNumber {
        let n = self.order as i64;
        let h = n / 2;
        let k = k.rem_euclid(n);
        let mut z = self.zero();
        if k < h {
            z.coeffs[k as usize] = BigRational::one();
        } else {
            z.coeffs[(k - h) as usize] = -BigRational::one();
        }
        z
    }

    /// The imaginary unit `i = ζ_N^(N/4)`.
    pub fn imag(&self) -> CycNumber {
        self.zeta_pow((self.order / 4) as i64)
    }

    /// `e^{iθ}` for `θ = angle · π`.
    pub fn exp_i_pi(&self, angle: DyadicAngle) -> Result<CycNumber, ArithError> {
        let needed = angle.required_order();
        if !self.order.is_multiple_of(needed) {
            return Err(ArithError::AngleOutOfRing {
                angle,
                needed,
                order: self.order,
            });
        }
        // θ = 2π k / N  =>  k = num · N / 2^(log2_den + 1)
        let k = (angle.num as i128 * self.order as i128) >> (angle.log2_den + 1);
        Ok(self.zeta_pow(k.rem_euclid(self.order as i128) as i64))
    }

    /// Exact matrix of a built-in gate.
    pub fn gate(&self, kind: GateKind) -> Result<Unitary2, ArithError> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Ok(match kind {
            GateKind::I => Unitary2::identity(*self),
            GateKind::X => Unitary2::not(*self),
            GateKind::V | GateKind::VDagger => {
                let i = self.imag();
                let one = self.one();
                let h = self.rational(half);
                let p = &(&one + &i) * &h;
                let m = &(&one - &i) * &h;
                let v = Unitary2::from_entries_unchecked([[p.clone(), m.clone()], [m, p]]);
                if kind == GateKind::V {
                    v
                } else {
                    v.adjoint()
                }
            }
            GateKind::R(angle) => Unitary2::from_entries_unchecked([
                [self.one(), self.zero()],
                [self.zero(), self.exp_i_pi(angle)?],
            ]),
        })
    }
}

/// Exact element of `Q(ζ_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    order: u32,
    coeffs: Box<[BigRational]>,
}

impl CycNumber {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn ring(&self) -> Ring {
        Ring { order: self.order }
    }

    /// Coefficients of `ζ^0 .. ζ^(N/2-1)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check(&self, other: &CycNumber) -> Result<(), ArithError> {
        if self.order != other.order {
            Err(ArithError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, other: &CycNumber) -> Result<CycNumber, ArithError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycNumber {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &CycNumber) -> Result<CycNumber, ArithError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycNumber {
            order: self.order,
            coeffs,
        })
    }

    /// Negacyclic product modulo `x^(N/2) + 1`.
    pub fn checked_mul(&self, other: &CycNumber) -> Result<CycNumber, ArithError> {
        self.check(other)?;
        let h = self.coeffs.len();
        let mut out = vec![BigRational::zero(); h];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                let k = i + j;
                if k < h {
                    out[k] += p;
                } else {
                    out[k - h] -= p;
                }
            }
        }
        Ok(CycNumber {
            order: self.order,
            coeffs: out.into_boxed_slice(),
        })
    }

    /// Complex conjugate: `ζ^k ↦ ζ^-k = -ζ^(N/2-k)`.
    pub fn conj(&self) -> CycNumber {
        let h = self.coeffs.len();
        let mut out = vec![BigRational::zero(); h];
        out[0] = self.coeffs[0].clone();
        for k in 1..h {
            out[h - k] = -&self.coeffs[k];
        }
        CycNumber {
            order: self.order,
            coeffs: out.into_boxed_slice(),
        }
    }

    /// `|z|^2` as an element of the ring (always real).
    pub fn norm_sqr(&self) -> CycNumber {
        self * &self.conj()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics if the operands live in rings of different order; use the
        /// `checked_*` methods to get an error instead.
        impl $trait<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                self.$checked(rhs).expect("cyclotomic ring order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "ζ^{k}")?,
                (_, false) => write!(f, "{mag}·ζ^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] (ζ = ζ_{})", self, self.order)
    }
}

/// Exact 2x2 unitary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Unitary2 {
    m: [[CycNumber; 2]; 2],
}

impl Unitary2 {
    /// Wraps `entries` after checking `U·U† = I` exactly.
    pub fn from_entries(entries: [[CycNumber; 2]; 2]) -> Result<Self, ArithError> {
        let order = entries[0][0].order;
        for e in entries.iter().flatten() {
            if e.order != order {
                return Err(ArithError::OrderMismatch {
                    left: order,
                    right: e.order,
                });
            }
        }
        let u = Unitary2 { m: entries };
        if u.is_unitary() {
            Ok(u)
        } else {
            Err(ArithError::NotUnitary)
        }
    }

    fn from_entries_unchecked(entries: [[CycNumber; 2]; 2]) -> Self {
        Unitary2 { m: entries }
    }

    pub fn identity(ring: Ring) -> Self {
        Unitary2 {
            m: [[ring.one(), ring.zero()], [ring.zero(), ring.one()]],
        }
    }

    pub fn not(ring: Ring) -> Self {
        Unitary2 {
            m: [[ring.zero(), ring.one()], [ring.one(), ring.zero()]],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> &CycNumber {
        &self.m[row][col]
    }

    pub fn entries(&self) -> &[[CycNumber; 2]; 2] {
        &self.m
    }

    pub fn ring(&self) -> Ring {
        self.m[0][0].ring()
    }

    pub fn checked_mul(&self, rhs: &Unitary2) -> Result<Unitary2, ArithError> {
        self.m[0][0].check(&rhs.m[0][0])?;
        let a = &self.m;
        let b = &rhs.m;
        let cell = |r: usize, c: usize| &(&a[r][0] * &b[0][c]) + &(&a[r][1] * &b[1][c]);
        Ok(Unitary2 {
            m: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        })
    }

    /// Conjugate transpose, which is the inverse for unitary matrices.
    pub fn adjoint(&self) -> Unitary2 {
        let m = &self.m;
        Unitary2 {
            m: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub fn det(&self) -> CycNumber {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn is_identity(&self) -> bool {
        self.m[0][0].is_one()
            && self.m[1][1].is_one()
            && self.m[0][1].is_zero()
            && self.m[1][0].is_zero()
    }

    pub fn is_not(&self) -> bool {
        self.m[0][1].is_one()
            && self.m[1][0].is_one()
            && self.m[0][0].is_zero()
            && self.m[1][1].is_zero()
    }

    /// True iff the matrix is exactly `I` or `X`.
    pub fn is_classical(&self) -> bool {
        self.is_identity() || self.is_not()
    }

    pub fn is_unitary(&self) -> bool {
        (self * &self.adjoint()).is_identity()
    }

    /// First column of the matrix: the state `U|0⟩`.
    pub fn apply_to_ket0(&self) -> QubitState {
        QubitState {
            amp0: self.m[0][0].clone(),
            amp1: self.m[1][0].clone(),
        }
    }
}

impl Mul<&Unitary2> for &Unitary2 {
    type Output = Unitary2;
    /// Panics on ring order mismatch.
    fn mul(self, rhs: &Unitary2) -> Unitary2 {
        self.checked_mul(rhs)
            .expect("cyclotomic ring order mismatch")
    }
}

impl fmt::Display for Unitary2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl fmt::Debug for Unitary2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unitary2{self} (ζ = ζ_{})", self.m[0][0].order)
    }
}

/// Single-qubit state `amp0|0⟩ + amp1|1⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QubitState {
    pub amp0: CycNumber,
    pub amp1: CycNumber,
}

impl QubitState {
    pub fn is_normalized(&self) -> bool {
        (&self.amp0.norm_sqr() + &self.amp1.norm_sqr()).is_one()
    }

    /// `Some(false)` for exactly `|0⟩`, `Some(true)` for exactly `|1⟩`.
    pub fn as_basis(&self) -> Option<bool> {
        match (
            self.amp0.is_one() && self.amp1.is_zero(),
            self.amp0.is_zero() && self.amp1.is_one(),
        ) {
            (true, _) => Some(false),
            (_, true) => Some(true),
            _ => None,
        }
    }
}

/// Names matrices as short products over the built-in gate alphabet,
/// e.g. `NR(1/2)` for `X·R(π/2)`.
#[derive(Debug, Clone)]
pub struct MatrixNamer {
    names: Vec<(Unitary2, String)>,
}

impl MatrixNamer {
    /// Enumerates products of up to `max_len` factors over `N, V, V+` and
    /// `R(a)` for each angle in `angles`; shorter words win.
    pub fn new(ring: Ring, angles: &[DyadicAngle], max_len: usize) -> Self {
        let mut alphabet: Vec<(String, Unitary2)> = vec![
            ("N".to_string(), Unitary2::not(ring)),
            (
                "V".to_string(),
                ring.gate(GateKind::V).expect("V is in every ring"),
            ),
            (
                "V+".to_string(),
                ring.gate(GateKind::VDagger).expect("V+ is in every ring"),
            ),
        ];
        let mut seen_angles: Vec<DyadicAngle> = Vec::new();
        for a in angles {
            if seen_angles.contains(a) {
                continue;
            }
            seen_angles.push(*a);
            if let Ok(m) = ring.gate(GateKind::R(*a)) {
                alphabet.push((format!("R({a})"), m));
            }
        }
        let mut names: Vec<(Unitary2, String)> = vec![(Unitary2::identity(ring), "I".to_string())];
        let mut frontier: Vec<(Unitary2, String)> = vec![(Unitary2::identity(ring), String::new())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (m, word) in &frontier {
                for (sym, g) in &alphabet {
                    let prod = m * g;
                    let w = format!("{word}{sym}");
                    if !names.iter().any(|(known, _)| *known == prod) {
                        names.push((prod.clone(), w.clone()));
                    }
                    next.push((prod, w));
                }
            }
            frontier = next;
        }
        MatrixNamer { names }
    }

    pub fn name(&self, m: &Unitary2) -> Option<&str> {
        self.names
            .iter()
            .find(|(known, _)| known == m)
            .map(|(_, n)| n.as_str())
    }

    /// Symbolic name when one exists, else the exact entries.
    pub fn render(&self, m: &Unitary2) -> String {
        match self.name(m) {
            Some(n) => n.to_string(),
            None => m.to_string(),
        }
    }
}
