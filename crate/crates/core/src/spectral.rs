//! Integer-matrix analysis of a candidate automorphism action: exact
//! characteristic polynomials, rational-root screening, certified spectral
//! radii, and the dynamical-degree / entropy report.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{DivisorClass, Rational};
use crate::tower::Variety;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::precondition("matrix must be square"));
        }
        Ok(IntMatrix { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.size();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &self.rows[i][k] * &other.rows[k][j]))
                    .collect()
            })
            .collect();
        IntMatrix { rows }
    }

    fn add_scaled_identity(&mut self, c: &BigInt) {
        for i in 0..self.size() {
            self.rows[i][i] += c;
        }
    }

    fn trace(&self) -> BigInt {
        (0..self.size()).fold(BigInt::zero(), |acc, i| acc + &self.rows[i][i])
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    /// `self * v` on a coefficient column vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (m, x)| acc + Rational::from_integer(m.clone()) * x)
            })
            .collect()
    }

    pub fn determinant(&self) -> BigInt {
        let p = char_poly(self);
        let c0 = p.coeffs[0].clone();
        if self.size().is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }
}

/// Monic integer polynomial, coefficients stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if lead.is_one() => Ok(IntPolynomial { coeffs }),
            Some(lead) if lead.is_zero() && coeffs.iter().all(Zero::is_zero) => {
                Err(Error::precondition("zero polynomial"))
            }
            Some(_) => Err(Error::precondition("polynomial must be monic")),
            None => Err(Error::precondition("zero polynomial")),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `P(A)` by Horner's scheme.
    pub fn eval_matrix(&self, a: &IntMatrix) -> IntMatrix {
        let n = a.size();
        let mut acc = IntMatrix {
            rows: vec![vec![BigInt::zero(); n]; n],
        };
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a);
            acc.add_scaled_identity(c);
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
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
            let a = c.abs();
            let coeff = if a.is_one() && k > 0 { String::new() } else { a.to_string() };
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coeff}x")?,
                _ => write!(f, "{coeff}x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `det(xI - A)` by the Faddeev-LeVerrier recurrence; every division is exact.
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    let n = m.size();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut acc = IntMatrix {
        rows: vec![vec![BigInt::zero(); n]; n],
    };
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        acc = m.mul(&acc);
        acc.add_scaled_identity(&coeffs[n - k + 1]);
        let t = m.mul(&acc).trace();
        let (q, r) = t.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = -q;
    }
    IntPolynomial { coeffs }
}

const SCREEN_LIMIT: u64 = 10_000_000;

/// All rational roots of a monic integer polynomial, sorted and without
/// repetition. They are integers dividing the constant term after the
/// factor `x^k` is removed.
pub fn rational_eigen_screen(p: &IntPolynomial) -> Result<Vec<BigInt>> {
    let lead = p.coeffs.last().ok_or_else(|| Error::precondition("zero polynomial"))?;
    if !lead.is_one() {
        return Err(Error::precondition("polynomial must be monic"));
    }
    let mut roots = Vec::new();
    let shift = p.coeffs.iter().position(|c| !c.is_zero()).expect("monic");
    if shift > 0 {
        roots.push(BigInt::zero());
    }
    let reduced = IntPolynomial {
        coeffs: p.coeffs[shift..].to_vec(),
    };
    if reduced.degree() == 0 {
        return Ok(roots);
    }
    let c0 = reduced.coeffs[0].abs();
    let cauchy = reduced.coeffs.iter().map(|c| c.abs()).max().expect("nonempty") + BigInt::one();
    let bound = c0.clone().min(cauchy);
    let limit = bound
        .to_u64()
        .filter(|&b| b <= SCREEN_LIMIT)
        .ok_or_else(|| Error::precondition("constant term too large for divisor screening"))?;
    for d in 1..=limit {
        let d = BigInt::from(d);
        if !(&c0 % &d).is_zero() {
            continue;
        }
        for cand in [-d.clone(), d] {
            if reduced.eval(&cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

// --- rational polynomial helpers for the square-free part -------------------

fn rpoly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rpoly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let q = r.last().expect("nonempty") / &lead;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &q * bi;
        }
        r.pop();
        rpoly_trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    rpoly_trim(&mut r);
    r
}

fn rpoly_is_zero(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn rpoly_monic(p: &[Rational]) -> Vec<Rational> {
    let lead = p.last().expect("nonempty").clone();
    p.iter().map(|c| c / &lead).collect()
}

fn rpoly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !rpoly_is_zero(&b) {
        let r = rpoly_rem(&a, &b);
        a = b;
        b = r;
    }
    rpoly_monic(&a)
}

fn rpoly_div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len() - db];
    let lead = b.last().expect("nonzero").clone();
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    debug_assert!(rpoly_is_zero(&r));
    q
}

/// Monic square-free part `p / gcd(p, p')`, exact.
pub fn squarefree_part(p: &IntPolynomial) -> Vec<Rational> {
    let a: Vec<Rational> = p.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect();
    if a.len() <= 2 {
        return a;
    }
    let da: Vec<Rational> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
        .collect();
    let g = rpoly_gcd(&a, &da);
    rpoly_monic(&rpoly_div_exact(&a, &g))
}

// --- certified root isolation ----------------------------------------------

/// A spectral radius with a rigorous bound on its distance to the true value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub error_bound: f64,
}

/// Roots of a square-free monic polynomial together with inclusion radii:
/// each disk `D(root_i, radius_i)` contains exactly one true root.
#[derive(Clone, Debug)]
pub struct RootEnclosures {
    pub roots: Vec<Complex64>,
    pub radii: Vec<f64>,
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of a monic square-free polynomial by Aberth-Ehrlich iteration,
/// certified with the Weierstrass-correction disks `n |p(z_i) / prod (z_i - z_j)|`
/// (a component of `k` disks holds exactly `k` roots). Evaluation error from
/// rounding the coefficients and from Horner's scheme is added to `|p(z_i)|`.
pub fn isolate_roots(monic: &[Rational], tol: f64) -> Result<RootEnclosures> {
    let n = monic.len() - 1;
    if n == 0 {
        return Ok(RootEnclosures {
            roots: vec![],
            radii: vec![],
        });
    }
    let c: Vec<f64> = monic.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Certification("coefficients exceed floating-point range".into()));
    }
    if n == 1 {
        let root = -&monic[0];
        let v = root.to_f64().unwrap_or(f64::NAN);
        let err = v.abs() * f64::EPSILON;
        return Ok(RootEnclosures {
            roots: vec![Complex64::new(v, 0.0)],
            radii: vec![err],
        });
    }

    let upper = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let start = c[0].abs().powf(1.0 / n as f64).clamp(0.5, upper);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(start, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();

    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-17 {
            break;
        }
    }

    let u = f64::EPSILON / 2.0;
    let gamma = (4 * n + 4) as f64 * u;
    let abs_c: Vec<f64> = c.iter().map(|x| x.abs()).collect();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _) = horner(&c, z[i]);
        let zn = z[i].norm();
        let bound = abs_c.iter().rev().fold(0.0f64, |acc, &a| acc * zn + a);
        let num = p.norm() + gamma * bound;
        let den: f64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product();
        if den == 0.0 {
            return Err(Error::Certification("coincident root approximations".into()));
        }
        radii.push(n as f64 * num / den * (1.0 + 1e-6));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                return Err(Error::Certification("inclusion disks overlap".into()));
            }
        }
    }
    if radii.iter().any(|r| !(r.is_finite() && *r <= tol)) {
        return Err(Error::Certification(format!("inclusion radius exceeds tolerance {tol:e}")));
    }
    Ok(RootEnclosures { roots: z, radii })
}

pub fn spectral_radius(m: &IntMatrix, tol: f64) -> Result<RadiusEstimate> {
    if !(tol > 0.0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    let p = char_poly(m);
    let sf = squarefree_part(&p);
    let enc = isolate_roots(&sf, tol)?;
    let mut value = 0.0f64;
    let mut error_bound = 0.0f64;
    for (z, r) in enc.roots.iter().zip(&enc.radii) {
        let modulus = z.norm();
        if modulus > value {
            value = modulus;
        }
        error_bound = error_bound.max(*r + modulus * f64::EPSILON);
    }
    Ok(RadiusEstimate { value, error_bound })
}

// --- automorphism report ----------------------------------------------------

/// Claimed pullback action on `H^{1,1}` and `H^{2,2}`, acting on coefficient
/// column vectors over the level's bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutAction {
    pub m11: IntMatrix,
    pub m22: IntMatrix,
}

impl AutAction {
    pub fn new(m11: IntMatrix, m22: IntMatrix) -> Result<Self> {
        if m11.size() != m22.size() {
            return Err(Error::ShapeMismatch(format!(
                "H11 action is {}x{}, H22 action is {}x{}",
                m11.size(),
                m11.size(),
                m22.size(),
                m22.size()
            )));
        }
        Ok(AutAction { m11, m22 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseCheck {
    pub is_inverse: bool,
    pub lambda1_of_inverse: f64,
    /// `lambda_1(f^{-1}) = lambda_2(f)` within `2 tol`.
    pub matches_lambda2: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreesReport {
    pub lambda1: f64,
    pub lambda1_error: f64,
    pub lambda2: f64,
    pub lambda2_error: f64,
    /// Degree on `H^{3,3}`, equal to 1 for automorphisms.
    pub lambda3: f64,
    /// `max(log lambda_1, log lambda_2, log lambda_3)`; absent when the action
    /// is rejected as non-invertible.
    pub h_top: Option<f64>,
    pub degrees_equal: bool,
    pub char_poly_11: String,
    pub char_poly_22: String,
    pub det_11: String,
    pub det_22: String,
    pub unimodular_11: bool,
    pub unimodular_22: bool,
    pub rational_roots_11: Vec<String>,
    pub rational_roots_22: Vec<String>,
    pub irrationality_certificate: Option<String>,
    pub preserves_cubic_form: bool,
    pub fixes_c1: bool,
    /// Both hard compatibility checks hold.
    pub automorphism_action: bool,
    /// `m11 x . m11 y = m22 (x . y)` on all basis pairs (informational).
    pub multiplicative: bool,
    /// `lambda_1 lambda_3 <= lambda_2^2` within `2 tol`; checked only for
    /// compatible actions.
    pub log_concave: Option<bool>,
    pub inverse: Option<InverseCheck>,
    pub notes: Vec<String>,
}

fn image(v: &Variety, m: &IntMatrix, x: &DivisorClass) -> Result<DivisorClass> {
    v.div_class(m.apply(x.coeffs()))
}

pub fn degrees_report(v: &Variety, act: &AutAction, tol: f64, inverse_m11: Option<&IntMatrix>) -> Result<DegreesReport> {
    let n = v.rank();
    if act.m11.size() != n || act.m22.size() != n {
        return Err(Error::ShapeMismatch(format!(
            "level has rank {n}, action matrices are {}x{}",
            act.m11.size(),
            act.m11.size()
        )));
    }
    let p11 = char_poly(&act.m11);
    let p22 = char_poly(&act.m22);
    let det11 = act.m11.determinant();
    let det22 = act.m22.determinant();
    let uni11 = det11.abs().is_one();
    let uni22 = det22.abs().is_one();
    let l1 = spectral_radius(&act.m11, tol)?;
    let l2 = spectral_radius(&act.m22, tol)?;
    let roots11 = rational_eigen_screen(&p11)?;
    let roots22 = rational_eigen_screen(&p22)?;
    let mut notes = Vec::new();

    let basis: Vec<DivisorClass> = (0..n).map(|i| v.div_basis(i)).collect();
    let images: Vec<DivisorClass> = basis.iter().map(|b| image(v, &act.m11, b)).collect::<Result<_>>()?;
    let mut preserves = true;
    'outer: for i in 0..n {
        for j in i..n {
            for k in j..n {
                if v.triple(&images[i], &images[j], &images[k])? != v.triple(&basis[i], &basis[j], &basis[k])? {
                    preserves = false;
                    notes.push(format!("cubic form changes on basis triple ({i}, {j}, {k})"));
                    break 'outer;
                }
            }
        }
    }
    let fixes_c1 = image(v, &act.m11, v.c1())? == *v.c1();
    if !fixes_c1 {
        notes.push("m11 does not fix c1".into());
    }
    let mut multiplicative = true;
    'mult: for i in 0..n {
        for j in i..n {
            let lhs = v.intersect_dd(&images[i], &images[j])?;
            let prod = v.intersect_dd(&basis[i], &basis[j])?;
            if lhs.coeffs() != act.m22.apply(prod.coeffs()).as_slice() {
                multiplicative = false;
                break 'mult;
            }
        }
    }
    let compatible = preserves && fixes_c1;
    if !compatible {
        notes.push("not an automorphism action".into());
    }

    let accepted = uni11 && uni22;
    if !uni11 || !uni22 {
        notes.push("unimodularity fails: pullback of an automorphism has determinant +-1".into());
    }
    let h_top = accepted.then(|| l1.value.ln().max(l2.value.ln()).max(0.0));

    let irrationality_certificate = (l1.value > 1.0 + tol && !roots11.iter().any(|r| r > &BigInt::one()))
        .then(|| "lambda1 irrational".to_string());
    let log_concave = compatible.then_some(l1.value <= l2.value * l2.value + 2.0 * tol);

    let inverse = match inverse_m11 {
        Some(inv) => {
            if inv.size() != n {
                return Err(Error::ShapeMismatch("inverse action has the wrong size".into()));
            }
            let is_inverse = act.m11.mul(inv) == IntMatrix::identity(n);
            let li = spectral_radius(inv, tol)?;
            Some(InverseCheck {
                is_inverse,
                lambda1_of_inverse: li.value,
                matches_lambda2: (li.value - l2.value).abs() <= 2.0 * tol,
            })
        }
        None => None,
    };

    Ok(DegreesReport {
        lambda1: l1.value,
        lambda1_error: l1.error_bound,
        lambda2: l2.value,
        lambda2_error: l2.error_bound,
        lambda3: 1.0,
        h_top,
        degrees_equal: (l1.value - l2.value).abs() <= 2.0 * tol,
        char_poly_11: p11.to_string(),
        char_poly_22: p22.to_string(),
        det_11: det11.to_string(),
        det_22: det22.to_string(),
        unimodular_11: uni11,
        unimodular_22: uni22,
        rational_roots_11: roots11.iter().map(ToString::to_string).collect(),
        rational_roots_22: roots22.iter().map(ToString::to_string).collect(),
        irrationality_certificate,
        preserves_cubic_form: preserves,
        fixes_c1,
        automorphism_action: compatible,
        multiplicative,
        log_concave,
        inverse,
        notes,
    })
}
