//! Swan conductors of rank-one Artin–Schreier sheaves `t^p − t = g`, !-extended along
//! `h = 0`, restricted to curve germs; vanishing-cycle dimensions through the
//! Deligne–Laumon reduction; the filtration formula; Euler characteristics of
//! restrictions to lines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exactalg::{substitute, Coefficient, ExactAlgError, LaurentGerm, MultiPoly, RatFun, Ring};
use crate::ideals::to_unipoly;
use crate::localgeom::{hensel_parametrize, intersection_multiplicity, CurveGerm, LocalGeomError, PlanarPoint};
use crate::ExtNat;

/// Transcendental naming the point of the divisor hit by the generic fiber.
pub const GENERIC_POINT_PARAM: &str = "eta";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamificationError {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("the denominator of g vanishes off the divisor h = 0")]
    PoleOffDivisor,
    #[error("the curve is contained in the divisor")]
    CurveInDivisor,
    #[error("the curve is singular at the point")]
    SingularAtPoint,
    #[error("the point is not on the curve")]
    NotOnCurve,
    #[error("the generic fiber cannot be parametrized at its point on the divisor")]
    GenericFiberSingular,
    #[error("the test function does not meet the divisor in a single reduced point (I = {0})")]
    NotFiniteOverBase(ExtNat),
    #[error("the divisor near the point must be a graph over a coordinate axis")]
    UnsupportedDivisor,
    #[error("the parameter name `{0}` is reserved")]
    ReservedParameter(String),
    #[error("the substitution is not an automorphism of the trait")]
    NotAutomorphism,
    #[error("invalid ramification filtration: {0}")]
    InvalidFiltration(String),
    #[error("the line is contained in the divisor")]
    LineInDivisor,
    #[error("boundary points are not rational over the coefficient field: roots of {0}")]
    IrrationalBoundary(String),
    #[error(transparent)]
    Series(#[from] ExactAlgError),
    #[error(transparent)]
    Geometry(LocalGeomError),
}

impl RamificationError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            RamificationError::InvalidPrime(_) => "invalid-prime",
            RamificationError::PoleOffDivisor => "pole-off-divisor",
            RamificationError::CurveInDivisor => "curve-in-divisor",
            RamificationError::SingularAtPoint => "singular-at-point",
            RamificationError::NotOnCurve => "not-on-curve",
            RamificationError::GenericFiberSingular => "generic-fiber-singular",
            RamificationError::NotFiniteOverBase(_) => "not-finite-over-base",
            RamificationError::UnsupportedDivisor => "unsupported-divisor",
            RamificationError::ReservedParameter(_) => "reserved-parameter",
            RamificationError::NotAutomorphism => "not-automorphism",
            RamificationError::InvalidFiltration(_) => "invalid-filtration",
            RamificationError::LineInDivisor => "line-in-divisor",
            RamificationError::IrrationalBoundary(_) => "irrational-boundary",
            RamificationError::Series(e) => e.code(),
            RamificationError::Geometry(e) => e.code(),
        }
    }
}

impl From<LocalGeomError> for RamificationError {
    fn from(e: LocalGeomError) -> Self {
        match e {
            LocalGeomError::SingularAtPoint => RamificationError::SingularAtPoint,
            LocalGeomError::NotOnCurve => RamificationError::NotOnCurve,
            LocalGeomError::Series(e) => RamificationError::Series(e),
            e => RamificationError::Geometry(e),
        }
    }
}

/// A rank-one Artin–Schreier sheaf `t^p − t = g` on a planar chart, !-extended along `h = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ASheafSpec {
    pub g: RatFun,
    pub h: MultiPoly,
}

impl ASheafSpec {
    pub fn new(g: RatFun, h: MultiPoly) -> Result<Self, RamificationError> {
        let p = g.ring().p();
        if p == 2 || !crate::exactalg::fp::is_prime(p) {
            return Err(RamificationError::InvalidPrime(p));
        }
        if g.ring().nvars() != 2 {
            return Err(RamificationError::Geometry(LocalGeomError::NotPlanar));
        }
        if g.den.as_constant().is_none() {
            // Every factor of the denominator must divide h.
            let k = g.den.total_degree();
            if h.is_zero() || h.pow(k).div_exact(&g.den).is_err() {
                return Err(RamificationError::PoleOffDivisor);
            }
        }
        Ok(ASheafSpec { g, h })
    }

    pub fn p(&self) -> u64 {
        self.g.ring().p()
    }

    pub fn ring(&self) -> &Ring {
        self.g.ring()
    }

    fn check_reserved(&self) -> Result<(), RamificationError> {
        if mentions_param(&self.g.num, GENERIC_POINT_PARAM)
            || mentions_param(&self.g.den, GENERIC_POINT_PARAM)
            || mentions_param(&self.h, GENERIC_POINT_PARAM)
        {
            return Err(RamificationError::ReservedParameter(GENERIC_POINT_PARAM.into()));
        }
        Ok(())
    }
}

fn mentions_param(f: &MultiPoly, name: &str) -> bool {
    f.terms().any(|(_, c)| c.params().iter().any(|s| &**s == name))
}

/// Adaptive precision: the polar part is recomputed at doubled precision until it is
/// unchanged across two rounds and the precision exceeds `|valuation| + guard`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial: i64,
    pub guard: i64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial: 8, guard: 4 }
    }
}

/// Swan conductor and total dimension of a restriction at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct RamificationReport {
    pub sw: u64,
    /// Dimension of the generic stalk.
    pub rank: u64,
    pub dimtot: u64,
    /// Polar part after Artin–Schreier reduction.
    pub witness: LaurentGerm,
    /// Pole order of the restriction before reduction (0 if regular).
    pub raw_pole_order: u64,
    /// Largest p-power root taken of a transcendental.
    pub perfection_level: u32,
    /// The restriction reduces to a constant: the cover is unramified there.
    pub unramified: bool,
    /// Parameter values where the leading coefficient of the witness degenerates,
    /// as the vanishing locus of the displayed polynomial.
    pub degeneracy: Option<String>,
    /// Precision used for the final certified computation.
    pub precision: i64,
}

impl RamificationReport {
    fn from_germ(g: &LaurentGerm, p: u64, precision: i64) -> Result<Self, RamificationError> {
        let raw = g.polar_part()?.first().map(|(e, _)| (-e) as u64).unwrap_or(0);
        let (witness, sw) = as_reduce(g, p)?;
        let witness = polar_only(&witness);
        let degeneracy = witness.leading_coefficient().filter(|c| !c.params().is_empty()).map(|c| {
            let num = c.numerator();
            let den = c.denominator();
            if den.is_one() {
                format!("{num}")
            } else {
                format!("({num})*({den})")
            }
        });
        Ok(RamificationReport {
            sw,
            rank: 1,
            dimtot: sw + 1,
            perfection_level: witness.max_level(),
            witness,
            raw_pole_order: raw,
            unramified: sw == 0,
            degeneracy,
            precision,
        })
    }

    fn regular(p: u64) -> Self {
        RamificationReport {
            sw: 0,
            rank: 1,
            dimtot: 1,
            witness: LaurentGerm::zero(p, 0),
            raw_pole_order: 0,
            perfection_level: 0,
            unramified: true,
            degeneracy: None,
            precision: 0,
        }
    }
}

fn polar_only(g: &LaurentGerm) -> LaurentGerm {
    let terms: Vec<(i64, Coefficient)> = g.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())).collect();
    LaurentGerm::from_terms(g.p(), &terms, 0)
}

/// Artin–Schreier reduction of the polar part, always removing the top pole.
/// Returns the reduced germ and the Swan conductor.
pub fn as_reduce(g: &LaurentGerm, p: u64) -> Result<(LaurentGerm, u64), ExactAlgError> {
    as_reduce_scheduled(g, p, &mut |_| 0)
}

/// Reduction in an order chosen by `pick`, which receives the exponents currently
/// reducible (negative, divisible by `p`, highest pole first) and returns an index.
pub fn as_reduce_scheduled(
    g: &LaurentGerm,
    p: u64,
    pick: &mut dyn FnMut(&[i64]) -> usize,
) -> Result<(LaurentGerm, u64), ExactAlgError> {
    let polar = g.polar_part()?;
    let mut terms: BTreeMap<i64, Coefficient> = polar.into_iter().collect();
    let pi = p as i64;
    loop {
        let reducible: Vec<i64> = terms.keys().copied().filter(|e| e % pi == 0).collect();
        if reducible.is_empty() {
            break;
        }
        let e = reducible[pick(&reducible).min(reducible.len() - 1)];
        // a·u^{e} = h^p with h = a^{1/p} u^{e/p}; subtracting h^p − h leaves + h.
        let a = terms.remove(&e).unwrap();
        let root = a.pth_root();
        let entry = terms.entry(e / pi).or_insert_with(|| Coefficient::zero(p));
        *entry = entry.add(&root);
        if entry.is_zero() {
            terms.remove(&(e / pi));
        }
        terms.retain(|k, _| *k < 0);
    }
    let sw = terms.keys().next().map(|e| (-e) as u64).unwrap_or(0);
    let mut all: Vec<(i64, Coefficient)> = terms.into_iter().collect();
    all.extend(g.terms().filter(|(e, _)| *e >= 0).map(|(e, c)| (e, c.clone())));
    Ok((LaurentGerm::from_terms(p, &all, g.precision()), sw))
}

fn restrict(g: &RatFun, germs: &[LaurentGerm; 2]) -> Result<LaurentGerm, ExactAlgError> {
    let n = substitute(&g.num, germs)?;
    let d = substitute(&g.den, germs)?;
    n.div(&d)
}

/// Swan conductor of the sheaf restricted to a curve germ, at the germ's point.
pub fn swan_on_curve(
    sheaf: &ASheafSpec,
    curve: &CurveGerm,
    policy: PrecisionPolicy,
) -> Result<RamificationReport, RamificationError> {
    let p = sheaf.p();
    match curve {
        CurveGerm::Parametric { .. } => {
            let germs = curve.coordinate_germs().expect("parametric germ");
            let prec = germs.iter().map(|g| g.precision()).min().unwrap_or(0);
            if substitute(&sheaf.g.den, &germs)?.is_zero() {
                return Err(RamificationError::CurveInDivisor);
            }
            let restricted = restrict(&sheaf.g, &germs)?;
            RamificationReport::from_germ(&restricted, p, prec)
        }
        CurveGerm::Implicit { f, point } => swan_on_implicit(sheaf, f, point, policy),
    }
}

fn swan_on_implicit(
    sheaf: &ASheafSpec,
    c: &MultiPoly,
    q: &PlanarPoint,
    policy: PrecisionPolicy,
) -> Result<RamificationReport, RamificationError> {
    let p = sheaf.p();
    let shifted = c.translate(q.coords());
    if !shifted.constant_term().is_zero() {
        return Err(RamificationError::NotOnCurve);
    }
    let solve_for = if !shifted.partial_derivative(1).constant_term().is_zero() {
        1
    } else if !shifted.partial_derivative(0).constant_term().is_zero() {
        0
    } else {
        return Err(RamificationError::SingularAtPoint);
    };
    // On a smooth branch the valuation of a function is its intersection number with
    // the branch, so both orders are known exactly before any series is formed.
    let vd = match intersection_multiplicity(&sheaf.g.den, c, q) {
        ExtNat::Infinity => return Err(RamificationError::CurveInDivisor),
        ExtNat::Finite(v) => v as i64,
    };
    let vn = match intersection_multiplicity(&sheaf.g.num, c, q) {
        ExtNat::Infinity => return Ok(RamificationReport::regular(p)),
        ExtNat::Finite(v) => v as i64,
    };
    let val = vn - vd;
    let mut k = policy.initial.max(2 * vd + policy.guard + 1);
    let mut previous: Option<Vec<(i64, Coefficient)>> = None;
    loop {
        let germ = hensel_parametrize(c, q, solve_for, k)?;
        let germs = germ.coordinate_germs().expect("parametric germ");
        let restricted = restrict(&sheaf.g, &germs)?;
        let polar = match restricted.polar_part() {
            Ok(pp) => Some(pp),
            Err(ExactAlgError::PrecisionExhausted) => None,
            Err(e) => return Err(e.into()),
        };
        if let Some(pp) = polar {
            if previous.as_ref() == Some(&pp) && k >= val.abs() + policy.guard {
                return RamificationReport::from_germ(&restricted, p, k);
            }
            previous = Some(pp);
        }
        k *= 2;
    }
}

/// How the generic fiber of a test function is realised.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum GenericFiber {
    /// The fiber through the point `(·, eta)` of the divisor, `eta` transcendental.
    #[default]
    Symbolic,
    /// The same with `eta` specialised to a value; a cross-check only.
    Sampled(Coefficient),
}

/// Vanishing-cycle data of a test function at a point of the divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiReport {
    pub special: RamificationReport,
    pub generic: RamificationReport,
    /// `sw(special) − sw(generic)`.
    pub dim_phi: i64,
    /// Point where the generic fiber meets the divisor.
    pub generic_point: PlanarPoint,
    /// Value of the test function on the generic fiber.
    pub rho: Coefficient,
}

/// Point of `h = 0` with one coordinate equal to `eta`, when `h` is a graph over an axis.
fn generic_point_on_divisor(h: &MultiPoly, eta: &Coefficient) -> Result<PlanarPoint, RamificationError> {
    let ring = h.ring();
    for i in 0..2 {
        let cs = h.coeffs_in(i);
        if cs.len() != 2 {
            continue;
        }
        let Some(lead) = cs[1].as_constant() else { continue };
        let mut pt = [eta.clone(), eta.clone()];
        pt[i] = cs[0].evaluate(&pt).neg().div(&lead);
        return Ok(PlanarPoint::new(ring, pt[0].clone(), pt[1].clone())?);
    }
    Err(RamificationError::UnsupportedDivisor)
}

/// `dim φ_f(F)` at `P` as the Swan conductor on the special fiber `f = f(P)` minus the
/// Swan conductor on the generic fiber; the rank terms cancel.
pub fn dl_phi_dim(
    sheaf: &ASheafSpec,
    f: &RatFun,
    pt: &PlanarPoint,
    mode: &GenericFiber,
    policy: PrecisionPolicy,
) -> Result<PhiReport, RamificationError> {
    sheaf.check_reserved()?;
    if mentions_param(&f.num, GENERIC_POINT_PARAM) || mentions_param(&f.den, GENERIC_POINT_PARAM) {
        return Err(RamificationError::ReservedParameter(GENERIC_POINT_PARAM.into()));
    }
    let p = sheaf.p();
    let f0 = f.evaluate(pt.coords()).ok_or(RamificationError::Geometry(LocalGeomError::PoleAtPoint))?;
    let special_curve = f.num.sub(&f.den.scale(&f0));
    let meet = intersection_multiplicity(&special_curve, &sheaf.h, pt);
    if meet != ExtNat::Finite(1) {
        return Err(RamificationError::NotFiniteOverBase(meet));
    }
    let special = swan_on_implicit(sheaf, &special_curve, pt, policy)?;

    let eta = match mode {
        GenericFiber::Symbolic => Coefficient::param(p, GENERIC_POINT_PARAM),
        GenericFiber::Sampled(v) => v.clone(),
    };
    let q = generic_point_on_divisor(&sheaf.h, &eta)?;
    let rho = f.evaluate(q.coords()).ok_or(RamificationError::GenericFiberSingular)?;
    let generic_curve = f.num.sub(&f.den.scale(&rho));
    let generic = swan_on_implicit(sheaf, &generic_curve, &q, policy).map_err(|e| match e {
        RamificationError::SingularAtPoint => RamificationError::GenericFiberSingular,
        e => e,
    })?;
    Ok(PhiReport { dim_phi: special.sw as i64 - generic.sw as i64, special, generic, generic_point: q, rho })
}

/// Orders of the lower ramification groups and fixed-space codimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakData {
    pub group_order: u64,
    /// `|G_i|` for `i = 0, 1, 2, …`; the last entry is 1.
    pub orders: Vec<u64>,
    /// `dim(F/F^{G_i})` for the same indices.
    pub dims: Vec<u64>,
}

impl BreakData {
    /// `G = G_0 = … = G_m ⊋ G_{m+1} = 1` acting through a nontrivial character.
    pub fn single_break(group_order: u64, m: usize) -> Self {
        let mut orders = vec![group_order; m + 1];
        orders.push(1);
        let mut dims = vec![1; m + 1];
        dims.push(0);
        BreakData { group_order, orders, dims }
    }
}

/// `sw = Σ_{i≥1} dim(F/F^{G_i}) / [G : G_i]`.
pub fn swan_from_breaks(b: &BreakData) -> Result<BigRational, RamificationError> {
    let bad = |m: &str| Err(RamificationError::InvalidFiltration(m.to_string()));
    if b.orders.len() != b.dims.len() || b.orders.is_empty() {
        return bad("orders and dims must have the same nonzero length");
    }
    if b.orders.windows(2).any(|w| w[1] > w[0]) {
        return bad("orders must be weakly decreasing");
    }
    if b.orders.iter().any(|&o| o == 0 || b.group_order % o != 0) {
        return bad("orders must divide the group order");
    }
    if *b.orders.last().unwrap() != 1 {
        return bad("the filtration must end in the trivial group");
    }
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for (o, d) in b.orders.iter().zip(&b.dims).skip(1) {
        sum += BigRational::new(BigInt::from(*d) * BigInt::from(*o), BigInt::from(b.group_order));
    }
    Ok(sum)
}

/// `v(σ(u) − u)` for an automorphism `u ↦ σ(u)` of the trait; infinite when the
/// difference vanishes to the tracked precision.
pub fn i_of_automorphism(sigma_u: &LaurentGerm) -> Result<ExtNat, RamificationError> {
    if sigma_u.valuation().ok() != Some(1) {
        return Err(RamificationError::NotAutomorphism);
    }
    let diff = sigma_u.sub(&LaurentGerm::uniformizer(sigma_u.p(), sigma_u.precision()));
    Ok(match diff.valuation() {
        Ok(v) => ExtNat::Finite(v as u64),
        Err(_) => ExtNat::Infinity,
    })
}

/// A line `α·x + β·y + γ = 0` of the affine chart, closed up in the projective plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub alpha: Coefficient,
    pub beta: Coefficient,
    pub gamma: Coefficient,
}

/// A boundary point of a line with the Swan conductor there.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    /// Parameter value on the line, `None` for the point at infinity.
    pub t: Option<Coefficient>,
    pub sw: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerReport {
    pub chi: i64,
    pub boundary: Vec<BoundaryPoint>,
}

/// `χ_c` of the sheaf restricted to the projective closure of a line, by
/// Grothendieck–Ogg–Shafarevich: `rank·(2 − #boundary) − Σ sw`.
pub fn gos_euler_line(sheaf: &ASheafSpec, line: &Line, policy: PrecisionPolicy) -> Result<EulerReport, RamificationError> {
    let p = sheaf.p();
    let lr = Ring::new(p, &["t"]);
    let t = lr.var("t");
    let cst = |c: &Coefficient| MultiPoly::constant(&lr, c.clone());
    // Affine parametrization and the direction of the point at infinity.
    let (param, direction) = if !line.beta.is_zero() {
        let y = t.scale(&line.alpha).add(&cst(&line.gamma)).scale(&line.beta.inv()).neg();
        ([t.clone(), y], [line.beta.clone(), line.alpha.neg()])
    } else if !line.alpha.is_zero() {
        ([cst(&line.gamma.div(&line.alpha).neg()), t.clone()], [Coefficient::zero(p), Coefficient::one(p)])
    } else {
        return Err(RamificationError::Geometry(LocalGeomError::NotPlanar));
    };
    let on_line = |f: &MultiPoly| f.compose(&param);
    let hl = on_line(&sheaf.h);
    if hl.is_zero() {
        return Err(RamificationError::LineInDivisor);
    }
    let gl = RatFun::new(on_line(&sheaf.g.num), on_line(&sheaf.g.den));

    let mut boundary = Vec::new();
    if hl.as_constant().is_none() {
        let (roots, rest) = to_unipoly(&hl, 0).rational_roots();
        if rest.degree().unwrap_or(0) > 0 {
            return Err(RamificationError::IrrationalBoundary(rest.to_string()));
        }
        for (r, _) in roots {
            let sw = swan_of_univariate(&gl, Some(&r), policy)?;
            boundary.push(BoundaryPoint { t: Some(r), sw });
        }
    }
    let top = sheaf.h.homogeneous_part(sheaf.h.total_degree());
    let infinity_on_divisor = sheaf.h.total_degree() > 0 && top.evaluate(&direction).is_zero();
    let sw_inf = swan_of_univariate(&gl, None, policy)?;
    if infinity_on_divisor {
        boundary.push(BoundaryPoint { t: None, sw: sw_inf });
    } else if sw_inf > 0 || pole_at_infinity(&gl) {
        return Err(RamificationError::PoleOffDivisor);
    }
    // Poles of g on the line must lie on the divisor.
    if gl.den.as_constant().is_none() {
        let (roots, _) = to_unipoly(&gl.den, 0).rational_roots();
        if roots.iter().any(|(r, _)| !boundary.iter().any(|b| b.t.as_ref() == Some(r))) {
            return Err(RamificationError::PoleOffDivisor);
        }
    }
    let chi = 2 - boundary.len() as i64 - boundary.iter().map(|b| b.sw as i64).sum::<i64>();
    Ok(EulerReport { chi, boundary })
}

fn pole_at_infinity(g: &RatFun) -> bool {
    !g.num.is_zero() && g.num.total_degree() > g.den.total_degree()
}

/// Swan conductor of `t^p − t = g(t)` at `t = r`, or at infinity for `None`.
fn swan_of_univariate(g: &RatFun, r: Option<&Coefficient>, policy: PrecisionPolicy) -> Result<u64, RamificationError> {
    let p = g.ring().p();
    if g.num.is_zero() {
        return Ok(0);
    }
    let mut k = policy.initial.max((g.den.total_degree() + g.num.total_degree()) as i64 * 2 + policy.guard);
    let mut previous = None;
    loop {
        let u = match r {
            Some(r) => LaurentGerm::uniformizer(p, k).add(&LaurentGerm::monomial(r.clone(), 0, k)),
            None => LaurentGerm::monomial(Coefficient::one(p), -1, k),
        };
        let gu = restrict_univariate(g, &u)?;
        if let Ok(pp) = gu.polar_part() {
            if previous.as_ref() == Some(&pp) && k >= gu.valuation_bound().abs() + policy.guard {
                return Ok(as_reduce(&gu, p)?.1);
            }
            previous = Some(pp);
        }
        k *= 2;
    }
}

fn restrict_univariate(g: &RatFun, u: &LaurentGerm) -> Result<LaurentGerm, ExactAlgError> {
    let n = substitute(&g.num, std::slice::from_ref(u))?;
    let d = substitute(&g.den, std::slice::from_ref(u))?;
    n.div(&d)
}
