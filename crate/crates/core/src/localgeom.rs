//! Local geometry of plane curves: multiplicities, intersection numbers at a point,
//! smooth-branch parametrization and jets.

use std::fmt;

use thiserror::Error;

use crate::exactalg::{substitute, Coefficient, ExactAlgError, LaurentGerm, MultiPoly, RatFun, Ring};
use crate::ExtNat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalGeomError {
    #[error("the point does not lie on the curve")]
    NotOnCurve,
    #[error("the partial derivative in the solved variable vanishes at the point")]
    SingularAtPoint,
    #[error("chart must have exactly two variables")]
    NotPlanar,
    #[error("denominator vanishes at the point")]
    PoleAtPoint,
    #[error(transparent)]
    Series(#[from] ExactAlgError),
}

impl LocalGeomError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            LocalGeomError::NotOnCurve => "not-on-curve",
            LocalGeomError::SingularAtPoint => "singular-at-point",
            LocalGeomError::NotPlanar => "not-planar",
            LocalGeomError::PoleAtPoint => "pole-at-point",
            LocalGeomError::Series(e) => e.code(),
        }
    }
}

/// A point of a two-variable affine chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlanarPoint {
    ring: Ring,
    coords: [Coefficient; 2],
}

impl PlanarPoint {
    pub fn new(ring: &Ring, a: Coefficient, b: Coefficient) -> Result<Self, LocalGeomError> {
        if ring.nvars() != 2 {
            return Err(LocalGeomError::NotPlanar);
        }
        Ok(PlanarPoint { ring: ring.clone(), coords: [a, b] })
    }

    pub fn origin(ring: &Ring) -> Self {
        let p = ring.p();
        Self::new(ring, Coefficient::zero(p), Coefficient::zero(p)).expect("planar chart")
    }

    pub fn from_ints(ring: &Ring, a: i64, b: i64) -> Self {
        let p = ring.p();
        Self::new(ring, Coefficient::from_i64(p, a), Coefficient::from_i64(p, b)).expect("planar chart")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coords(&self) -> &[Coefficient; 2] {
        &self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for PlanarPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coords[0], self.coords[1])
    }
}

impl fmt::Debug for PlanarPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A formal curve germ at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveGerm {
    Implicit { f: MultiPoly, point: PlanarPoint },
    /// `x_solved = P_solved + series(t)`, `x_other = P_other + t`.
    Parametric { point: PlanarPoint, solved: usize, series: LaurentGerm },
}

impl CurveGerm {
    pub fn point(&self) -> &PlanarPoint {
        match self {
            CurveGerm::Implicit { point, .. } | CurveGerm::Parametric { point, .. } => point,
        }
    }

    /// Coordinate germs `(x(t), y(t))` of a parametric germ.
    pub fn coordinate_germs(&self) -> Option<[LaurentGerm; 2]> {
        match self {
            CurveGerm::Implicit { .. } => None,
            CurveGerm::Parametric { point, solved, series } => {
                let k = series.precision();
                let p = point.ring.p();
                let solved_germ = series.add(&LaurentGerm::monomial(point.coords[*solved].clone(), 0, k));
                let other = 1 - *solved;
                let t = LaurentGerm::uniformizer(p, k).add(&LaurentGerm::monomial(point.coords[other].clone(), 0, k));
                let mut out = [t.clone(), t];
                out[*solved] = solved_germ;
                Some(out)
            }
        }
    }
}

fn check_planar(f: &MultiPoly) -> Result<(), LocalGeomError> {
    if f.ring().nvars() != 2 {
        return Err(LocalGeomError::NotPlanar);
    }
    Ok(())
}

/// Order of `f` at `P`.
pub fn multiplicity_at(f: &MultiPoly, pt: &PlanarPoint) -> Result<u64, LocalGeomError> {
    check_planar(f)?;
    let g = f.translate(pt.coords());
    if !g.constant_term().is_zero() {
        return Err(LocalGeomError::NotOnCurve);
    }
    Ok(g.order())
}

pub fn is_smooth_point(f: &MultiPoly, pt: &PlanarPoint) -> bool {
    multiplicity_at(f, pt) == Ok(1)
}

/// Restriction `f(x, 0)` as coefficients indexed by the power of `x`.
fn on_x_axis(f: &MultiPoly) -> Vec<Coefficient> {
    let r = f.specialize_var(1, &Coefficient::zero(f.p()));
    let d = r.degree_in(0) as usize;
    let mut out = vec![Coefficient::zero(f.p()); if r.is_zero() { 0 } else { d + 1 }];
    for (e, c) in r.terms() {
        out[e[0] as usize] = c.clone();
    }
    out
}

fn divide_by_y(f: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(
        f.ring(),
        f.terms().map(|(e, c)| {
            let mut e = e.clone();
            e[1] -= 1;
            (e, c.clone())
        }),
    )
}

fn low_order(cs: &[Coefficient]) -> u64 {
    cs.iter().position(|c| !c.is_zero()).unwrap_or(0) as u64
}

/// Local intersection number at the origin (Fulton's algorithm). The caller guarantees
/// the curves share no component through the origin; otherwise the loop would not end.
fn fulton(f: &MultiPoly, g: &MultiPoly) -> ExtNat {
    let mut acc = 0u64;
    let (mut f, mut g) = (f.clone(), g.clone());
    loop {
        if f.is_zero() || g.is_zero() {
            return ExtNat::Infinity;
        }
        if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
            return ExtNat::Finite(acc);
        }
        let mut fx = on_x_axis(&f);
        let mut gx = on_x_axis(&g);
        match (fx.is_empty(), gx.is_empty()) {
            (true, true) => return ExtNat::Infinity,
            (true, false) => {
                acc += low_order(&gx);
                f = divide_by_y(&f);
                continue;
            }
            (false, true) => {
                acc += low_order(&fx);
                g = divide_by_y(&g);
                continue;
            }
            (false, false) => {}
        }
        if fx.len() > gx.len() {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut fx, &mut gx);
        }
        let (r, s) = (fx.len() - 1, gx.len() - 1);
        let mut shift: crate::exactalg::Exps = smallvec::SmallVec::from_elem(0u32, 2);
        shift[0] = (s - r) as u32;
        let lf = fx[r].clone();
        let lg = gx[s].clone();
        g = g.scale(&lf).sub(&f.mul_term(&shift, &lg));
    }
}

/// `I_P(f, g)`, infinite iff `f` and `g` share a component through `P`.
pub fn intersection_multiplicity(f: &MultiPoly, g: &MultiPoly, pt: &PlanarPoint) -> ExtNat {
    assert_eq!(f.ring().nvars(), 2, "planar chart");
    let (f, g) = (f.translate(pt.coords()), g.translate(pt.coords()));
    if f.is_zero() || g.is_zero() || f.gcd(&g).constant_term().is_zero() {
        return ExtNat::Infinity;
    }
    fulton(&f, &g)
}

/// Solves `f = 0` near `P` for the variable `solve_for` as a power series in the other
/// coordinate, correct modulo `t^k`.
pub fn hensel_parametrize(
    f: &MultiPoly,
    pt: &PlanarPoint,
    solve_for: usize,
    k: i64,
) -> Result<CurveGerm, LocalGeomError> {
    check_planar(f)?;
    let g = f.translate(pt.coords());
    if !g.constant_term().is_zero() {
        return Err(LocalGeomError::NotOnCurve);
    }
    let dg = g.partial_derivative(solve_for);
    if dg.constant_term().is_zero() {
        return Err(LocalGeomError::SingularAtPoint);
    }
    let p = f.p();
    let mut phi = LaurentGerm::zero(p, 1);
    let mut n = 1;
    while n < k {
        let n2 = (2 * n).min(k);
        let ext = phi.extend_precision(n2);
        let t = LaurentGerm::uniformizer(p, n2);
        let mut assign = [t.clone(), t];
        assign[solve_for] = ext.clone();
        let val = substitute(&g, &assign)?;
        let der = substitute(&dg, &assign)?;
        phi = ext.sub(&val.div(&der)?).truncate(n2);
        n = n2;
    }
    Ok(CurveGerm::Parametric { point: pt.clone(), solved: solve_for, series: phi.extend_precision(k.max(1)).truncate(k) })
}

/// Terms of total degree `< n` at `P`, translated back.
pub fn jet_truncate(f: &MultiPoly, pt: &PlanarPoint, n: u64) -> MultiPoly {
    f.translate(pt.coords()).truncate_below(n).untranslate(pt.coords())
}

/// Jet of a rational function regular at `P`.
pub fn jet_truncate_rational(f: &RatFun, pt: &PlanarPoint, n: u64) -> Result<MultiPoly, LocalGeomError> {
    let num = f.num.translate(pt.coords());
    let den = f.den.translate(pt.coords());
    let c0 = den.constant_term();
    if c0.is_zero() {
        return Err(LocalGeomError::PoleAtPoint);
    }
    let ring = den.ring().clone();
    let inv0 = c0.inv();
    // 1/den = inv0 · Σ (−(den·inv0 − 1))^k
    let e = ring.one().sub(&den.scale(&inv0)).truncate_below(n);
    let mut inv = ring.one();
    let mut pw = ring.one();
    for _ in 1..n.max(1) {
        pw = pw.mul(&e).truncate_below(n);
        if pw.is_zero() {
            break;
        }
        inv = inv.add(&pw);
    }
    let jet = num.mul(&inv.scale(&inv0)).truncate_below(n);
    Ok(jet.untranslate(pt.coords()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactalg::fp::{inv_mod, mul_mod, sub_mod};
    use proptest::prelude::*;
    use smallvec::SmallVec;

    fn ring() -> Ring {
        Ring::new(5, &["x", "y"])
    }

    /// Length oracle: dim k[x,y]/((f, g) + m^d) by Gaussian elimination on monomials of
    /// degree < d. Requires F_p coefficients and a curve pair through the origin.
    pub(crate) fn truncated_length(f: &MultiPoly, g: &MultiPoly, d: u32) -> u64 {
        let p = f.p();
        let monos: Vec<(u32, u32)> = (0..d).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect();
        let index = |a: u32, b: u32| monos.iter().position(|m| *m == (a, b));
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for h in [f, g] {
            for (a, b) in monos.iter() {
                let mut row = vec![0u64; monos.len()];
                for (e, c) in h.terms() {
                    let (ea, eb) = (e[0] + a, e[1] + b);
                    if ea + eb < d {
                        row[index(ea, eb).unwrap()] = c.as_const().unwrap();
                    }
                }
                rows.push(row);
            }
        }
        let mut rank = 0;
        let cols = monos.len();
        for col in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|r| rows[*r][col] != 0) else { continue };
            rows.swap(rank, piv);
            let inv = inv_mod(rows[rank][col], p);
            let pivot: Vec<u64> = rows[rank].iter().map(|v| mul_mod(*v, inv, p)).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let k = row[col];
                    for (x, pv) in row.iter_mut().zip(pivot.iter()) {
                        *x = sub_mod(*x, mul_mod(k, *pv, p), p);
                    }
                }
            }
            rows[rank] = pivot;
            rank += 1;
        }
        (cols - rank) as u64
    }

    #[test]
    fn multiplicities() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let o = PlanarPoint::origin(&r);
        let cusp = y.pow(2).sub(&x.pow(3));
        assert_eq!(multiplicity_at(&cusp, &o), Ok(2));
        assert_eq!(multiplicity_at(&x, &o), Ok(1));
        assert_eq!(multiplicity_at(&cusp.mul(&x), &o), Ok(3));
        assert_eq!(multiplicity_at(&x.add(&r.one()), &o), Err(LocalGeomError::NotOnCurve));
    }

    #[test]
    fn intersection_examples() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let o = PlanarPoint::origin(&r);
        assert_eq!(intersection_multiplicity(&x, &y, &o), ExtNat::Finite(1));
        assert_eq!(intersection_multiplicity(&y, &y.sub(&x.pow(2)), &o), ExtNat::Finite(2));
        let cusp = y.pow(2).sub(&x.pow(3));
        assert_eq!(intersection_multiplicity(&cusp, &y, &o), ExtNat::Finite(3));
        assert_eq!(truncated_length(&cusp, &y, 10), 3);
        assert_eq!(intersection_multiplicity(&x.mul(&y), &x.mul(&y.add(&r.one())), &o), ExtNat::Infinity);
        // common component away from the point
        let q = PlanarPoint::from_ints(&r, 0, 0);
        let away = x.sub(&r.one());
        assert_eq!(intersection_multiplicity(&away.mul(&y), &away.mul(&x), &q), ExtNat::Finite(1));
    }

    #[test]
    fn hensel_examples() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let o = PlanarPoint::origin(&r);
        let g = hensel_parametrize(&x.sub(&y.pow(2)), &o, 0, 6).unwrap();
        let CurveGerm::Parametric { series, .. } = &g else { panic!() };
        assert_eq!(series, &LaurentGerm::monomial(Coefficient::one(5), 2, 6));

        let f = x.add(&x.mul(&y)).sub(&y);
        let g = hensel_parametrize(&f, &o, 0, 8).unwrap();
        let CurveGerm::Parametric { series, .. } = &g else { panic!() };
        let expected: Vec<(i64, Coefficient)> =
            (1..8).map(|e| (e, Coefficient::from_i64(5, if e % 2 == 1 { 1 } else { -1 }))).collect();
        assert_eq!(series, &LaurentGerm::from_terms(5, &expected, 8));
        let res = substitute(&f, &g.coordinate_germs().unwrap()).unwrap();
        assert!(res.is_zero() && res.precision() >= 8);

        assert_eq!(hensel_parametrize(&y, &o, 0, 5), Err(LocalGeomError::SingularAtPoint));
    }

    #[test]
    fn hensel_with_parameters_away_from_origin() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let eta = Coefficient::param(5, "eta");
        let pt = PlanarPoint::new(&r, Coefficient::zero(5), eta.clone()).unwrap();
        let c = eta.div(&eta.add(&Coefficient::one(5)));
        let f = y.sub(&MultiPoly::constant(&r, c).mul(&x.add(&r.one())).mul(&y.add(&r.one())).scale(&Coefficient::one(5)));
        // f = y − c(1+x)(1+y) passes through (0, η) when c = η/(1+η)
        let g = hensel_parametrize(&f, &pt, 1, 10).unwrap();
        let res = substitute(&f, &g.coordinate_germs().unwrap()).unwrap();
        assert!(res.is_zero() && res.precision() >= 10);
    }

    #[test]
    fn jets() {
        let r = ring();
        let (x, y) = (r.var("x"), r.var("y"));
        let o = PlanarPoint::origin(&r);
        let f = RatFun::new(y.clone(), r.one().add(&x));
        assert_eq!(jet_truncate_rational(&f, &o, 2).unwrap(), y);
        assert_eq!(jet_truncate_rational(&f, &o, 3).unwrap(), y.sub(&x.mul(&y)));
        assert_eq!(jet_truncate(&x.pow(2).add(&x.pow(3)), &o, 3), x.pow(2));
    }

    pub(crate) fn arb_curve(max_deg: u32) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((1u64..5, 0u32..=max_deg, 0u32..=max_deg), 1..5).prop_map(move |terms| {
            let r = Ring::new(5, &["x", "y"]);
            MultiPoly::from_terms(
                &r,
                terms
                    .into_iter()
                    .filter(|(_, a, b)| a + b >= 1 && a + b <= max_deg)
                    .map(|(c, a, b)| (SmallVec::from_slice(&[a, b]), Coefficient::from_u64(5, c))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn fulton_axioms(f in arb_curve(4), g in arb_curve(4), h in arb_curve(3), a in arb_curve(2)) {
            prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let o = PlanarPoint::origin(f.ring());
            let i = |u: &MultiPoly, v: &MultiPoly| intersection_multiplicity(u, v, &o);
            prop_assert_eq!(i(&f, &g), i(&g, &f));
            prop_assert_eq!(i(&f, &g.mul(&h)), i(&f, &g) + i(&f, &h));
            prop_assert_eq!(i(&f, &g.add(&a.mul(&f))), i(&f, &g));
        }

        #[test]
        fn fulton_matches_length_oracle(f in arb_curve(4), g in arb_curve(4)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let o = PlanarPoint::origin(f.ring());
            let ip = intersection_multiplicity(&f, &g, &o);
            let mf = multiplicity_at(&f, &o).unwrap();
            let mg = multiplicity_at(&g, &o).unwrap();
            if let ExtNat::Finite(n) = ip {
                prop_assert!(n >= mf * mg);
                prop_assert_eq!(truncated_length(&f, &g, (n + 4) as u32), n);
                let tf = f.homogeneous_part(mf);
                let tg = g.homogeneous_part(mg);
                let transversal = tf.gcd(&tg).as_constant().is_some();
                prop_assert_eq!(n == mf * mg, transversal);
            }
        }

        #[test]
        fn hensel_residual(c1 in 1u64..5, c2 in 0u64..5, c3 in 0u64..5, k in 3i64..12) {
            let r = Ring::new(5, &["x", "y"]);
            let (x, y) = (r.var("x"), r.var("y"));
            let f = x.scale(&Coefficient::from_u64(5, c1))
                .add(&y.pow(2).scale(&Coefficient::from_u64(5, c2)))
                .add(&x.mul(&y).scale(&Coefficient::from_u64(5, c3)))
                .add(&x.pow(3));
            let o = PlanarPoint::origin(&r);
            let g = hensel_parametrize(&f, &o, 0, k).unwrap();
            let res = substitute(&f, &g.coordinate_germs().unwrap()).unwrap();
            prop_assert!(res.is_zero());
            prop_assert!(res.precision() >= k);
        }

        #[test]
        fn jet_congruence(f in arb_curve(6), n in 1u64..6) {
            let o = PlanarPoint::origin(f.ring());
            let d = f.sub(&jet_truncate(&f, &o, n));
            prop_assert!(d.is_zero() || d.order() >= n);
        }
    }
}
