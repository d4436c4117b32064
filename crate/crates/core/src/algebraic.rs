//! The degree-8 algebraic equations whose union contains the Erdős–Mordell
//! curve.
//!
//! In the canonical frame A(0,r), B(p,0), C(q,0) every side distance is the
//! absolute value of a linear form. Fixing the sign of each form turns
//! `S = 2(r_a + r_b + r_c)` into a linear polynomial, and squaring away the
//! three radicals in `√Q1 + √Q2 + √Q3 = S` leaves
//!
//! ```text
//! ((S² + Q3 − Q2 − Q1)² − 4·Q1·Q2 − 4·S²·Q3)² − 64·S²·Q1·Q2·Q3 = 0
//! ```
//!
//! which is built here with explicit polynomial arithmetic, one octic per
//! sign case.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{CanonicalPlacement, Point};
use crate::poly::{monomial_count, BivariatePoly};

/// `α·x + β·y + γ`, oriented positive on the triangle's side of its line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearForm {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub norm: f64,
}

impl LinearForm {
    fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        LinearForm { alpha, beta, gamma, norm: alpha.hypot(beta) }
    }

    pub fn eval(&self, m: Point) -> f64 {
        self.alpha * m.x + self.beta * m.y + self.gamma
    }

    /// Signed distance to the zero line.
    pub fn signed_distance(&self, m: Point) -> f64 {
        self.eval(m) / self.norm
    }

    pub fn to_poly(&self) -> BivariatePoly {
        BivariatePoly::linear(self.alpha, self.beta, self.gamma)
    }
}

/// Forms for lines BC, CA and AB in the canonical frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideForms {
    pub bc: LinearForm,
    pub ca: LinearForm,
    pub ab: LinearForm,
}

impl SideForms {
    pub fn as_array(&self) -> [LinearForm; 3] {
        [self.bc, self.ca, self.ab]
    }
}

pub fn linear_forms(placement: &CanonicalPlacement) -> SideForms {
    let CanonicalPlacement { p, q, r, .. } = *placement;
    SideForms {
        bc: LinearForm::new(0.0, 1.0, 0.0),
        // qr − q·y − r·x, positive at B(p, 0) since q > p.
        ca: LinearForm::new(-r, -q, q * r),
        // r·x + p·y − p·r, positive at C(q, 0).
        ab: LinearForm::new(r, p, -p * r),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn of(v: f64) -> Self {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Resolved signs of the three absolute values inside S, in BC, CA, AB order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignCase(pub [Sign; 3]);

impl SignCase {
    pub const INTERIOR: SignCase = SignCase([Sign::Plus; 3]);

    pub fn all() -> [SignCase; 8] {
        let mut out = [SignCase::INTERIOR; 8];
        for (k, case) in out.iter_mut().enumerate() {
            for (bit, s) in case.0.iter_mut().enumerate() {
                if k & (1 << bit) != 0 {
                    *s = Sign::Minus;
                }
            }
        }
        out
    }
}

impl fmt::Display for SignCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .0
            .iter()
            .map(|s| match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })
            .collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for SignCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!("sign case needs three signs, got {s:?}")));
        }
        let mut out = [Sign::Plus; 3];
        for (slot, p) in out.iter_mut().zip(parts) {
            *slot = match p {
                "+" | "+1" | "1" => Sign::Plus,
                "-" | "-1" => Sign::Minus,
                other => return Err(Error::InvalidParameter(format!("bad sign {other:?}"))),
            };
        }
        Ok(SignCase(out))
    }
}

/// Sign case at a point, with a flag per side when the point lies on the
/// side line and the sign was tie-broken to `+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignCaseAt {
    pub case: SignCase,
    pub ties: [bool; 3],
}

impl SignCaseAt {
    pub fn has_tie(&self) -> bool {
        self.ties.iter().any(|&t| t)
    }
}

/// Sign case of canonical-frame point `m`. A signed distance within
/// `1e-12 × scale` of zero counts as a tie.
pub fn sign_case_at(placement: &CanonicalPlacement, m: Point) -> SignCaseAt {
    let forms = linear_forms(placement).as_array();
    let tol = 1e-12 * placement.scale().max(m.x.abs()).max(m.y.abs());
    let mut signs = [Sign::Plus; 3];
    let mut ties = [false; 3];
    for (k, f) in forms.iter().enumerate() {
        let d = f.signed_distance(m);
        if d.abs() <= tol {
            ties[k] = true;
        } else {
            signs[k] = Sign::of(d);
        }
    }
    SignCaseAt { case: SignCase(signs), ties }
}

/// S = 2(σ_a L_a/|L_a| + σ_b L_b/|L_b| + σ_c L_c/|L_c|) as a linear polynomial.
pub fn signed_s(placement: &CanonicalPlacement, case: SignCase) -> BivariatePoly {
    let forms = linear_forms(placement).as_array();
    let mut s = BivariatePoly::zero(1);
    for (f, sign) in forms.iter().zip(case.0) {
        s = s.add(&f.to_poly().scale(2.0 * sign.value() / f.norm));
    }
    s
}

/// Q1 = x² + (y−r)², Q2 = (x−p)² + y², Q3 = (x−q)² + y².
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticTriple {
    pub q1: BivariatePoly,
    pub q2: BivariatePoly,
    pub q3: BivariatePoly,
}

impl QuadraticTriple {
    pub fn new(placement: &CanonicalPlacement) -> Self {
        QuadraticTriple {
            q1: BivariatePoly::squared_distance(0.0, placement.r),
            q2: BivariatePoly::squared_distance(placement.p, 0.0),
            q3: BivariatePoly::squared_distance(placement.q, 0.0),
        }
    }
}

/// Which of Q1, Q2, Q3 is moved next to S in the first squaring step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsolatedTerm {
    Q1,
    Q2,
    #[default]
    Q3,
}

impl IsolatedTerm {
    pub const ALL: [IsolatedTerm; 3] = [IsolatedTerm::Q1, IsolatedTerm::Q2, IsolatedTerm::Q3];

    fn arrange<T>(self, q1: T, q2: T, q3: T) -> (T, T, T) {
        match self {
            IsolatedTerm::Q3 => (q1, q2, q3),
            IsolatedTerm::Q2 => (q1, q3, q2),
            IsolatedTerm::Q1 => (q2, q3, q1),
        }
    }
}

/// Bivariate polynomial of total degree ≤ 8 (45 coefficients).
#[derive(Clone, PartialEq)]
pub struct OcticPolynomial(BivariatePoly);

impl fmt::Debug for OcticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OcticPolynomial({:?})", self.0)
    }
}

impl OcticPolynomial {
    pub const DEGREE: usize = 8;
    pub const COEFFICIENTS: usize = monomial_count(8);

    pub fn zero() -> Self {
        OcticPolynomial(BivariatePoly::zero(Self::DEGREE))
    }

    pub fn from_poly(p: &BivariatePoly) -> Result<Self> {
        if p.total_degree().is_some_and(|d| d > Self::DEGREE) {
            return Err(Error::InvalidParameter("polynomial degree exceeds 8".into()));
        }
        if !p.is_finite() {
            return Err(Error::NonFinite("octic coefficient"));
        }
        Ok(OcticPolynomial(p.with_degree_bound(Self::DEGREE)))
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// `((i, j), c)` for all 45 monomials with i + j ≤ 8.
    pub fn coefficients(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.0.terms()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.0.total_degree()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.max_abs_coeff()
    }

    pub fn eval(&self, m: Point) -> f64 {
        self.0.eval(m.x, m.y)
    }

    pub fn as_poly(&self) -> &BivariatePoly {
        &self.0
    }
}

pub fn eval_octic(p: &OcticPolynomial, m: Point) -> f64 {
    p.eval(m)
}

pub fn build_octic(placement: &CanonicalPlacement, case: SignCase) -> OcticPolynomial {
    build_octic_ordered(placement, case, IsolatedTerm::Q3)
}

/// The octic with `isolated` playing the role of Q3 in the squaring chain.
pub fn build_octic_ordered(
    placement: &CanonicalPlacement,
    case: SignCase,
    isolated: IsolatedTerm,
) -> OcticPolynomial {
    let s = signed_s(placement, case);
    let QuadraticTriple { q1, q2, q3 } = QuadraticTriple::new(placement);
    let (qi, qj, qk) = isolated.arrange(q1, q2, q3);

    let s2 = s.square();
    let w = s2.add(&qk).sub(&qi).sub(&qj);
    let qij = qi.mul(&qj);
    let inner = w.square().sub(&qij.scale(4.0)).sub(&s2.mul(&qk).scale(4.0));
    let rhs = s2.mul(&qij).mul(&qk).scale(64.0);
    let residual = inner.square().sub(&rhs);
    OcticPolynomial::from_poly(&residual).expect("squaring chain yields a finite octic")
}

/// The same residual evaluated numerically at `m` without expansion.
pub fn octic_residual_direct(
    placement: &CanonicalPlacement,
    case: SignCase,
    isolated: IsolatedTerm,
    m: Point,
) -> f64 {
    let forms = linear_forms(placement).as_array();
    let s: f64 = 2.0
        * forms
            .iter()
            .zip(case.0)
            .map(|(f, sign)| sign.value() * f.signed_distance(m))
            .sum::<f64>();
    let sq = |x0: f64, y0: f64| (m.x - x0).powi(2) + (m.y - y0).powi(2);
    let (qi, qj, qk) = isolated.arrange(
        sq(0.0, placement.r),
        sq(placement.p, 0.0),
        sq(placement.q, 0.0),
    );
    let s2 = s * s;
    let w = s2 + qk - qi - qj;
    let inner = w * w - 4.0 * qi * qj - 4.0 * s2 * qk;
    inner * inner - 64.0 * s2 * qi * qj * qk
}

/// The natural rounding scale for evaluating `p` at `m`:
/// `max|c_ij| × max(1, |x|, |y|)^8`.
pub fn octic_scale(p: &OcticPolynomial, m: Point) -> f64 {
    p.max_abs_coeff() * 1f64.max(m.x.abs()).max(m.y.abs()).powi(8)
}
