//! Exact rationals and the graded intersection pairing of a smooth 3-fold.
//!
//! A ring is described by two ordered bases of equal length (divisor classes
//! in `H^{1,1}` and curve classes in `H^{2,2}`) and two tables: the product of
//! two basis divisors as a curve class, and the pairing of a basis divisor
//! with a basis curve. Everything else is bilinear extension.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`; panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `"p/q"` form used in JSON reports; integers keep the `/1`.
pub fn rational_to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn serialize_pq<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_pq(r))
}

/// Identifies one level of a tower. Classes carry the id of the level they
/// were built on so that mixing levels is caught at the operation boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VarietyId(u64);

impl VarietyId {
    pub fn fresh() -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(1);
        VarietyId(NEXT.fetch_add(1, Ordering::Relaxed))
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Divisor,
    Curve,
}

/// A class in one graded piece, as coefficients over the level's basis.
pub trait GradedClass: Clone + Sized {
    const GRADE: Grade;

    fn variety(&self) -> VarietyId;
    fn coeffs(&self) -> &[Rational];
    fn from_parts(variety: VarietyId, coeffs: Vec<Rational>) -> Self;

    fn is_zero(&self) -> bool {
        self.coeffs().iter().all(Zero::is_zero)
    }
}

macro_rules! graded_class {
    ($name:ident, $grade:expr) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $name {
            variety: VarietyId,
            coeffs: Vec<Rational>,
        }

        impl GradedClass for $name {
            const GRADE: Grade = $grade;

            fn variety(&self) -> VarietyId {
                self.variety
            }

            fn coeffs(&self) -> &[Rational] {
                &self.coeffs
            }

            fn from_parts(variety: VarietyId, coeffs: Vec<Rational>) -> Self {
                $name { variety, coeffs }
            }
        }

        impl $name {
            pub fn variety(&self) -> VarietyId {
                self.variety
            }

            pub fn coeffs(&self) -> &[Rational] {
                &self.coeffs
            }

            pub fn coeff(&self, i: usize) -> &Rational {
                &self.coeffs[i]
            }

            pub fn is_zero(&self) -> bool {
                GradedClass::is_zero(self)
            }

            pub fn scale(&self, c: &Rational) -> Self {
                $name {
                    variety: self.variety,
                    coeffs: self.coeffs.iter().map(|x| x * c).collect(),
                }
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                lincomb(&[(Rational::one(), self), (Rational::one(), other)])
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                lincomb(&[(Rational::one(), self), (-Rational::one(), other)])
            }

            pub fn neg(&self) -> Self {
                self.scale(&-Rational::one())
            }
        }
    };
}

graded_class!(DivisorClass, Grade::Divisor);
graded_class!(CurveClass, Grade::Curve);

/// Coefficient-wise linear combination. All terms must share a level.
pub fn lincomb<C: GradedClass>(terms: &[(Rational, &C)]) -> Result<C> {
    let (_, first) = terms.first().ok_or_else(|| Error::precondition("empty linear combination"))?;
    let variety = first.variety();
    let len = first.coeffs().len();
    let mut out = vec![Rational::zero(); len];
    for (c, class) in terms {
        if class.variety() != variety || class.coeffs().len() != len {
            return Err(Error::BasisMismatch);
        }
        for (o, x) in out.iter_mut().zip(class.coeffs()) {
            *o += c * x;
        }
    }
    Ok(C::from_parts(variety, out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTables {
    /// `dd[i][j]` is the curve-basis coefficient vector of `D_i . D_j`.
    pub dd: Vec<Vec<Vec<Rational>>>,
    /// `dc[i][k]` is the number `D_i . C_k`.
    pub dc: Vec<Vec<Rational>>,
}

impl IntersectionTables {
    pub fn zeros(rank: usize) -> Self {
        IntersectionTables {
            dd: vec![vec![vec![Rational::zero(); rank]; rank]; rank],
            dc: vec![vec![Rational::zero(); rank]; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.dc.len()
    }
}

/// The intersection ring of one level: labelled bases plus product tables.
#[derive(Clone, Debug)]
pub struct IntersectionRing {
    id: VarietyId,
    div_labels: Vec<String>,
    curve_labels: Vec<String>,
    tables: IntersectionTables,
}

impl IntersectionRing {
    pub fn new(div_labels: Vec<String>, curve_labels: Vec<String>, tables: IntersectionTables) -> Result<Self> {
        let n = div_labels.len();
        if curve_labels.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "H11 rank {} differs from H22 rank {}",
                n,
                curve_labels.len()
            )));
        }
        let shape_ok = tables.dd.len() == n
            && tables.dc.len() == n
            && tables.dd.iter().all(|row| row.len() == n && row.iter().all(|c| c.len() == n))
            && tables.dc.iter().all(|row| row.len() == n);
        if !shape_ok {
            return Err(Error::ShapeMismatch("intersection tables do not match basis size".into()));
        }
        Ok(IntersectionRing {
            id: VarietyId::fresh(),
            div_labels,
            curve_labels,
            tables,
        })
    }

    pub fn id(&self) -> VarietyId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.div_labels.len()
    }

    pub fn div_labels(&self) -> &[String] {
        &self.div_labels
    }

    pub fn curve_labels(&self) -> &[String] {
        &self.curve_labels
    }

    pub fn tables(&self) -> &IntersectionTables {
        &self.tables
    }

    pub fn div_index(&self, label: &str) -> Option<usize> {
        self.div_labels.iter().position(|l| l == label)
    }

    pub fn curve_index(&self, label: &str) -> Option<usize> {
        self.curve_labels.iter().position(|l| l == label)
    }

    pub fn div_class(&self, coeffs: Vec<Rational>) -> Result<DivisorClass> {
        if coeffs.len() != self.rank() {
            return Err(Error::BasisMismatch);
        }
        Ok(DivisorClass::from_parts(self.id, coeffs))
    }

    pub fn curve_class(&self, coeffs: Vec<Rational>) -> Result<CurveClass> {
        if coeffs.len() != self.rank() {
            return Err(Error::BasisMismatch);
        }
        Ok(CurveClass::from_parts(self.id, coeffs))
    }

    pub fn div_from_ints(&self, coeffs: &[i64]) -> Result<DivisorClass> {
        self.div_class(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn curve_from_ints(&self, coeffs: &[i64]) -> Result<CurveClass> {
        self.curve_class(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero_div(&self) -> DivisorClass {
        DivisorClass::from_parts(self.id, vec![Rational::zero(); self.rank()])
    }

    pub fn zero_curve(&self) -> CurveClass {
        CurveClass::from_parts(self.id, vec![Rational::zero(); self.rank()])
    }

    pub fn div_basis(&self, i: usize) -> DivisorClass {
        let mut c = vec![Rational::zero(); self.rank()];
        c[i] = Rational::one();
        DivisorClass::from_parts(self.id, c)
    }

    pub fn curve_basis(&self, i: usize) -> CurveClass {
        let mut c = vec![Rational::zero(); self.rank()];
        c[i] = Rational::one();
        CurveClass::from_parts(self.id, c)
    }

    /// Divisor class by basis label, e.g. `"E2"`.
    pub fn div(&self, label: &str) -> Result<DivisorClass> {
        self.div_index(label)
            .map(|i| self.div_basis(i))
            .ok_or_else(|| Error::precondition(format!("no divisor basis element {label}")))
    }

    /// Curve class by basis label, e.g. `"HH"`.
    pub fn curve(&self, label: &str) -> Result<CurveClass> {
        self.curve_index(label)
            .map(|i| self.curve_basis(i))
            .ok_or_else(|| Error::precondition(format!("no curve basis element {label}")))
    }

    fn owns<C: GradedClass>(&self, c: &C) -> Result<()> {
        if c.variety() == self.id && c.coeffs().len() == self.rank() {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn intersect_dd(&self, x: &DivisorClass, y: &DivisorClass) -> Result<CurveClass> {
        self.owns(x)?;
        self.owns(y)?;
        let n = self.rank();
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.tables.dd[i][j]) {
                    if !t.is_zero() {
                        *o += &w * t;
                    }
                }
            }
        }
        Ok(CurveClass::from_parts(self.id, out))
    }

    pub fn pair_dc(&self, x: &DivisorClass, c: &CurveClass) -> Result<Rational> {
        self.owns(x)?;
        self.owns(c)?;
        let mut out = Rational::zero();
        for (i, xi) in x.coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, ck) in c.coeffs().iter().enumerate() {
                let t = &self.tables.dc[i][k];
                if !ck.is_zero() && !t.is_zero() {
                    out += xi * ck * t;
                }
            }
        }
        Ok(out)
    }

    pub fn triple(&self, x: &DivisorClass, y: &DivisorClass, z: &DivisorClass) -> Result<Rational> {
        let xy = self.intersect_dd(x, y)?;
        self.pair_dc(z, &xy)
    }

    /// Checks `dd` symmetry and full permutation symmetry of the cubic form
    /// on every basis triple. Returns the first offending triple.
    pub fn symmetry_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                if self.tables.dd[i][j] != self.tables.dd[j][i] {
                    return Some((i, j, j));
                }
            }
        }
        let basis: Vec<DivisorClass> = (0..n).map(|i| self.div_basis(i)).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.triple(&basis[i], &basis[j], &basis[k]).ok()?;
                    let perms = [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)];
                    for (a, b, c) in perms {
                        if self.triple(&basis[a], &basis[b], &basis[c]).ok()? != v {
                            return Some((i, j, k));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn format_div(&self, x: &DivisorClass) -> String {
        format_combination(x.coeffs(), &self.div_labels)
    }

    pub fn format_curve(&self, c: &CurveClass) -> String {
        format_combination(c.coeffs(), &self.curve_labels)
    }
}

/// Renders `c_0*l_0 + c_1*l_1 - ...`, skipping zero terms. Always writes the
/// coefficient, so the output re-parses to the same vector.
pub fn format_combination(coeffs: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in coeffs.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&format!("{}*{}", c.abs(), l));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Divisor => f.write_str("divisor"),
            Grade::Curve => f.write_str("curve"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// P3 with the single generator H.
    fn p3() -> IntersectionRing {
        let mut t = IntersectionTables::zeros(1);
        t.dd[0][0][0] = int(1);
        t.dc[0][0] = int(1);
        IntersectionRing::new(vec!["H".into()], vec!["HH".into()], t).unwrap()
    }

    /// P3 blown up at a point, tables written out by hand.
    fn p3_point() -> IntersectionRing {
        let mut t = IntersectionTables::zeros(2);
        t.dd[0][0][0] = int(1);
        t.dd[1][1][1] = int(-1);
        t.dc[0][0] = int(1);
        t.dc[1][1] = int(-1);
        IntersectionRing::new(
            vec!["H".into(), "E1".into()],
            vec!["HH".into(), "L1".into()],
            t,
        )
        .unwrap()
    }

    #[test]
    fn rationals_stay_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(rational_to_pq(&(rat(1, 3) + rat(2, 3))), "1/1");
    }

    #[test]
    fn lincomb_identity_and_cancellation() {
        let r = p3_point();
        let h = r.div("H").unwrap();
        let e = r.div("E1").unwrap();
        assert_eq!(lincomb(&[(int(1), &h), (int(0), &e)]).unwrap(), h);
        assert!(lincomb(&[(int(1), &h), (int(-1), &h)]).unwrap().is_zero());
        let c1 = lincomb(&[(int(4), &h), (int(-2), &e)]).unwrap();
        assert_eq!(r.format_div(&c1), "4*H - 2*E1");
    }

    #[test]
    fn lincomb_rejects_mixed_levels() {
        let a = p3();
        let b = p3();
        let err = lincomb(&[(int(1), &a.div_basis(0)), (int(1), &b.div_basis(0))]).unwrap_err();
        assert_eq!(err, Error::BasisMismatch);
        assert_eq!(err.to_string(), "basis mismatch");
        assert!(lincomb::<DivisorClass>(&[]).is_err());
    }

    #[test]
    fn products_on_p3_and_point_blowup() {
        let r = p3();
        let h = r.div_basis(0);
        assert_eq!(r.intersect_dd(&h, &h).unwrap(), r.curve_basis(0));
        assert_eq!(r.pair_dc(&h, &r.curve_basis(0)).unwrap(), int(1));
        assert_eq!(r.triple(&h, &h, &h).unwrap(), int(1));

        let b = p3_point();
        let e = b.div("E1").unwrap();
        let l = b.curve("L1").unwrap();
        assert_eq!(b.intersect_dd(&e, &e).unwrap(), l.neg());
        assert_eq!(b.pair_dc(&e, &l).unwrap(), int(-1));
        assert_eq!(b.triple(&e, &e, &e).unwrap(), int(1));
        assert!(b.symmetry_violation().is_none());
    }

    #[test]
    fn operations_reject_foreign_classes() {
        let a = p3();
        let b = p3();
        assert_eq!(a.intersect_dd(&a.div_basis(0), &b.div_basis(0)), Err(Error::BasisMismatch));
        assert_eq!(a.pair_dc(&b.div_basis(0), &a.curve_basis(0)), Err(Error::BasisMismatch));
        assert_eq!(a.triple(&a.div_basis(0), &a.div_basis(0), &b.div_basis(0)), Err(Error::BasisMismatch));
        assert!(a.div_class(vec![int(1), int(2)]).is_err());
    }

    #[test]
    fn malformed_tables_rejected() {
        let t = IntersectionTables::zeros(2);
        assert!(IntersectionRing::new(vec!["H".into()], vec!["HH".into()], t.clone()).is_err());
        assert!(IntersectionRing::new(vec!["A".into(), "B".into()], vec!["l".into()], t).is_err());
    }

    #[test]
    fn asymmetric_table_detected() {
        let mut t = IntersectionTables::zeros(2);
        t.dd[0][1][0] = int(1);
        let r = IntersectionRing::new(vec!["A".into(), "B".into()], vec!["a".into(), "b".into()], t).unwrap();
        assert!(r.symmetry_violation().is_some());
    }

    #[test]
    fn formatting_round_values() {
        let labels: Vec<String> = ["HH", "L1", "L2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(format_combination(&[int(0), int(0), int(0)], &labels), "0");
        assert_eq!(format_combination(&[int(-1), rat(3, 2), int(0)], &labels), "-1*HH + 3/2*L1");
    }
}
