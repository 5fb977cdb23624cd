//! Solutions of `eta . eta = 0` on `X_1`, the blowup of `P3` at `t` points
//! and `s` disjoint smooth curves in general position.
//!
//! Writing `eta = a H - sum e_i E_i - sum f_j F_j`, the square vanishes iff
//! `e_i = 0`, `a^2 = sum d_j f_j^2` and, for each `j` with `f_j != 0`,
//! `f_j / a = 2 d_j / (4 d_j + 2 g_j - 2)`. A nonzero solution is therefore
//! fixed up to scale by its support `S`, and exists iff
//! `sum_{j in S} d_j r_j^2 = 1`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{int, serialize_pq, CurveClass, DivisorClass, Rational};
use crate::tower::{BaseKind, Tower, Variety};

pub const MAX_CURVES: usize = 20;

/// Points and curves `(degree, genus)` blown up in one general-position layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X1Config {
    points: usize,
    curves: Vec<(u32, u32)>,
}

impl X1Config {
    pub fn new(points: usize, curves: Vec<(u32, u32)>) -> Result<Self> {
        if curves.iter().any(|&(d, _)| d < 1) {
            return Err(Error::precondition("curve degrees must be at least 1"));
        }
        Ok(X1Config { points, curves })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn curves(&self) -> &[(u32, u32)] {
        &self.curves
    }

    /// Tower with all points first, then the curves `F1..Fs` in order.
    pub fn build_tower(&self) -> Result<Tower> {
        let mut t = Tower::new(BaseKind::P3);
        for _ in 0..self.points {
            t.push_point();
        }
        for &(d, g) in &self.curves {
            let top = t.top();
            let mut c = vec![Rational::zero(); top.rank()];
            c[0] = int(i64::from(d));
            let center = top.curve_class(c)?;
            t.push_curve(&center, g)?;
        }
        Ok(t)
    }
}

pub fn eta_square(v: &Variety, eta: &DivisorClass) -> Result<CurveClass> {
    v.intersect_dd(eta, eta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveEquation {
    pub degree: u32,
    pub genus: u32,
    /// `r_j = f_j / a = 2 d_j / (4 d_j + 2 g_j - 2)`
    #[serde(serialize_with = "serialize_pq")]
    pub ratio: Rational,
    /// `d_j r_j^2`, the contribution of curve `j` to the support constraint.
    #[serde(serialize_with = "serialize_pq")]
    pub weight: Rational,
}

/// The system `eta . eta = 0` in closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemDescription {
    pub points: usize,
    pub curves: Vec<CurveEquation>,
    pub equations: Vec<String>,
}

pub fn x1_system(config: &X1Config) -> SystemDescription {
    let curves: Vec<CurveEquation> = config
        .curves
        .iter()
        .map(|&(d, g)| {
            let d = i64::from(d);
            let normal = 4 * d + 2 * i64::from(g) - 2;
            let ratio = Rational::new((2 * d).into(), normal.into());
            let weight = int(d) * &ratio * &ratio;
            CurveEquation {
                degree: d as u32,
                genus: g,
                ratio,
                weight,
            }
        })
        .collect();
    let mut equations = Vec::new();
    let rhs: Vec<String> = (1..=curves.len()).map(|j| format!("{}*f{j}^2", curves[j - 1].degree)).collect();
    equations.push(format!(
        "a^2 = {}",
        if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") }
    ));
    for i in 1..=config.points {
        equations.push(format!("e{i}^2 = 0"));
    }
    for (j, c) in curves.iter().enumerate() {
        let j = j + 1;
        equations.push(format!(
            "2*a*{}*f{j} = {}*f{j}^2  (f{j} = 0 or f{j}/a = {})",
            c.degree,
            4 * c.degree + 2 * c.genus - 2,
            c.ratio
        ));
    }
    SystemDescription {
        points: config.points,
        curves,
        equations,
    }
}

/// A solution ray with representative `a = 1`, `e_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaRay {
    /// 0-based curve indices with `f_j != 0`.
    pub support: Vec<usize>,
    /// `f_j` for every curve (zero off the support).
    #[serde(serialize_with = "serialize_rationals")]
    pub coeffs: Vec<Rational>,
    /// Whether every `f_j >= 0`, as required of classes coming from a
    /// pseudo-effective `eta`.
    pub nonnegative: bool,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pq: Vec<String> = v.iter().map(crate::ring::rational_to_pq).collect();
    pq.serialize(s)
}

impl EtaRay {
    /// `H - sum_j f_j F_j` on the top level of `config.build_tower()`.
    pub fn to_class(&self, v: &Variety) -> Result<DivisorClass> {
        let mut c = vec![Rational::zero(); v.rank()];
        c[v.div_index("H").ok_or(Error::BasisMismatch)?] = Rational::one();
        for (j, f) in self.coeffs.iter().enumerate() {
            let idx = v.div_index(&format!("F{}", j + 1)).ok_or(Error::BasisMismatch)?;
            c[idx] = -f.clone();
        }
        v.div_class(c)
    }
}

pub fn x1_solve(config: &X1Config) -> Result<Vec<EtaRay>> {
    let n = config.curves.len();
    if n > MAX_CURVES {
        return Err(Error::EnumerationBound {
            curves: n,
            limit: MAX_CURVES,
        });
    }
    let system = x1_system(config);
    let weights: Vec<Rational> = system.curves.iter().map(|c| c.weight.clone()).collect();
    let mut supports = Vec::new();
    let mut current = Vec::new();
    enumerate_supports(&weights, 0, &Rational::zero(), &mut current, &mut supports);

    let rays: Vec<EtaRay> = supports
        .into_iter()
        .map(|support| {
            let coeffs: Vec<Rational> = (0..n)
                .map(|j| {
                    if support.contains(&j) {
                        system.curves[j].ratio.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let nonnegative = coeffs.iter().all(|c| !c.is_negative());
            EtaRay {
                support,
                coeffs,
                nonnegative,
            }
        })
        .collect();

    if !rays.is_empty() {
        let tower = config.build_tower()?;
        let top = tower.top();
        for ray in &rays {
            let sq = eta_square(top, &ray.to_class(top)?)?;
            assert!(sq.is_zero(), "returned ray {:?} does not square to zero", ray.support);
        }
    }
    Ok(rays)
}

/// Pre-order walk over increasing index sequences; yields supports in
/// lexicographic order. All weights are positive, so a branch stops as soon
/// as its partial sum reaches or passes 1.
fn enumerate_supports(
    weights: &[Rational],
    start: usize,
    sum: &Rational,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for j in start..weights.len() {
        let s = sum + &weights[j];
        if s > Rational::one() {
            continue;
        }
        current.push(j);
        if s.is_one() {
            out.push(current.clone());
        } else {
            enumerate_supports(weights, j + 1, &s, current, out);
        }
        current.pop();
    }
}
