//! Singular-support models, transverse test functions, test families and sweeps of
//! their vanishing-cycle data, and probing for the depth of a sheaf.

use rayon::prelude::*;
use thiserror::Error;

use crate::exactalg::{Coefficient, Exps, MultiPoly, RatFun};
use crate::localgeom::{intersection_multiplicity, jet_truncate_rational, PlanarPoint};
use crate::ramification::{
    dl_phi_dim, ASheafSpec, GenericFiber, PrecisionPolicy, RamificationError, RamificationReport, GENERIC_POINT_PARAM,
};
use crate::ExtNat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("the test function does not vanish at the point")]
    NotVanishing,
    #[error("the test function has a pole at the point")]
    PoleAtPoint,
    #[error("the covector is zero")]
    ZeroCovector,
    #[error("invalid singular-support component {0}: {1}")]
    InvalidComponent(usize, String),
    #[error("not a transverse test function: {0}")]
    NotTtfun(Refutation),
    #[error("no transverse test function of the form ξ + quadratic was found")]
    NoTtfunFound,
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("unsupported component {0} for the Milnor formula")]
    UnsupportedComponent(usize),
    #[error(transparent)]
    Ramification(#[from] RamificationError),
}

impl SweepError {
    pub fn code(&self) -> &'static str {
        match self {
            SweepError::NotVanishing => "not-vanishing",
            SweepError::PoleAtPoint => "pole-at-point",
            SweepError::ZeroCovector => "zero-covector",
            SweepError::InvalidComponent(..) => "invalid-component",
            SweepError::NotTtfun(_) => "not-ttfun",
            SweepError::NoTtfunFound => "no-ttfun-found",
            SweepError::InvalidFamily(_) => "invalid-family",
            SweepError::UnsupportedComponent(_) => "unsupported-component",
            SweepError::Ramification(e) => e.code(),
        }
    }
}

/// A component of a singular support, as an input model.
#[derive(Clone, Debug, PartialEq)]
pub enum SSComponent {
    ZeroSection,
    /// Covectors proportional to `dh` along `h = 0`.
    ConormalToDivisor(MultiPoly),
    /// The whole cotangent fiber at a point.
    ConormalToPoint(PlanarPoint),
    /// Covectors proportional to `ω = a·dx + b·dy` along `h = 0`.
    LineFieldAlongDivisor { h: MultiPoly, omega: [MultiPoly; 2] },
}

impl SSComponent {
    /// The divisor and line field for the two kinds living over a curve.
    fn line_field(&self) -> Option<(MultiPoly, [MultiPoly; 2])> {
        match self {
            SSComponent::ConormalToDivisor(h) => Some((h.clone(), [h.partial_derivative(0), h.partial_derivative(1)])),
            SSComponent::LineFieldAlongDivisor { h, omega } => Some((h.clone(), omega.clone())),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint {
    pub point: PlanarPoint,
    pub xi: [Coefficient; 2],
}

impl CotangentPoint {
    pub fn new(point: PlanarPoint, xi: [Coefficient; 2]) -> Self {
        CotangentPoint { point, xi }
    }
}

/// Why a function is not a transverse test function.
#[derive(Clone, Debug, PartialEq)]
pub enum Refutation {
    /// `df(P)` is not a nonzero multiple of `ξ`.
    CovectorMismatch { df: [Coefficient; 2] },
    /// `Γ_df` meets the component along a curve through `P`.
    NonIsolated { component: usize, witness: MultiPoly },
    NotTransverse { component: usize },
    /// Several components pass through `(P, ξ)`.
    NotSmoothPoint { components: Vec<usize> },
    /// The divisor of the component through `(P, ξ)` is singular at `P`.
    SingularDivisor { component: usize },
}

impl std::fmt::Display for Refutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Refutation::CovectorMismatch { df } => write!(f, "df(P) = ({}, {}) is not a multiple of the covector", df[0], df[1]),
            Refutation::NonIsolated { component, witness } => {
                write!(f, "the graph of df meets component {component} along {witness} = 0")
            }
            Refutation::NotTransverse { component } => write!(f, "the intersection with component {component} is not transverse"),
            Refutation::NotSmoothPoint { components } => write!(f, "components {components:?} all pass through the covector"),
            Refutation::SingularDivisor { component } => write!(f, "the divisor of component {component} is singular at the point"),
        }
    }
}

/// Evidence that a function is a transverse test function.
#[derive(Clone, Debug, PartialEq)]
pub struct TtfunCertificate {
    /// Component through `(P, ξ)`; `None` when `(P, ξ)` is off the singular support, in
    /// which case the vanishing cycles at `P` vanish.
    pub component: Option<usize>,
    /// Tangent vectors at `(P, ξ)` in the coordinates `(x, y, p_x, p_y)`: two of the
    /// graph of `df`, two of the component.
    pub tangents: Option<[[Coefficient; 4]; 4]>,
    pub determinant: Option<Coefficient>,
    /// Local intersection number of `Γ_df` with each curve-supported component that
    /// meets it at `P`.
    pub isolation: Vec<(usize, ExtNat)>,
}

/// `∂f/∂v` as a polynomial numerator over `den^2`.
fn gradient_numerators(f: &RatFun) -> [MultiPoly; 2] {
    [0, 1].map(|i| f.den.mul(&f.num.partial_derivative(i)).sub(&f.num.mul(&f.den.partial_derivative(i))))
}

/// Laplace expansion along the first row.
pub fn determinant(m: &[Vec<Coefficient>]) -> Coefficient {
    let n = m.len();
    let p = m[0][0].p();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Coefficient::zero(p);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Coefficient>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, c)| c.clone()).collect()).collect();
        let term = m[0][j].mul(&determinant(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Decides whether `f` is a transverse test function at `ν` for the modelled
/// singular support.
pub fn is_ttfun(f: &RatFun, ss: &[SSComponent], nu: &CotangentPoint) -> Result<Result<TtfunCertificate, Refutation>, SweepError> {
    let pt = &nu.point;
    let c = pt.coords();
    let p = pt.ring().p();
    if nu.xi.iter().all(|v| v.is_zero()) {
        return Err(SweepError::ZeroCovector);
    }
    match f.evaluate(c) {
        None => return Err(SweepError::PoleAtPoint),
        Some(v) if !v.is_zero() => return Err(SweepError::NotVanishing),
        _ => {}
    }
    let jet = jet_truncate_rational(f, pt, 3).map_err(|_| SweepError::PoleAtPoint)?.translate(c);
    let coef = |i: u32, j: u32| jet.coeff(&[i, j]);
    let df = [coef(1, 0), coef(0, 1)];
    if df.iter().all(|v| v.is_zero()) || !df[0].mul(&nu.xi[1]).sub(&df[1].mul(&nu.xi[0])).is_zero() {
        return Ok(Err(Refutation::CovectorMismatch { df }));
    }
    let two = Coefficient::from_u64(p, 2);
    let (fxx, fxy, fyy) = (coef(2, 0).mul(&two), coef(1, 1), coef(0, 2).mul(&two));
    let zero = Coefficient::zero(p);
    let one = Coefficient::one(p);
    let graph = [
        [one.clone(), zero.clone(), fxx, fxy.clone()],
        [zero.clone(), one.clone(), fxy, fyy],
    ];
    let grad = gradient_numerators(f);

    let mut through = Vec::new();
    let mut isolation = Vec::new();
    for (k, comp) in ss.iter().enumerate() {
        match comp {
            SSComponent::ZeroSection => {}
            SSComponent::ConormalToPoint(q) => {
                if q == pt {
                    through.push(k);
                }
            }
            _ => {
                let (h, omega) = comp.line_field().unwrap();
                if !h.evaluate(c).is_zero() {
                    continue;
                }
                let om = [omega[0].evaluate(c), omega[1].evaluate(c)];
                if om.iter().all(|v| v.is_zero()) {
                    return Err(SweepError::InvalidComponent(k, "the line field vanishes at the point".into()));
                }
                let w = grad[0].mul(&omega[1]).sub(&grad[1].mul(&omega[0]));
                if !w.evaluate(c).is_zero() {
                    continue;
                }
                let meet = intersection_multiplicity(&h, &w, pt);
                if meet.is_infinite() {
                    return Ok(Err(Refutation::NonIsolated { component: k, witness: h.gcd(&w).monic() }));
                }
                isolation.push((k, meet));
                through.push(k);
            }
        }
    }
    let component = match through.len() {
        0 => return Ok(Ok(TtfunCertificate { component: None, tangents: None, determinant: None, isolation })),
        1 => through[0],
        _ => return Ok(Err(Refutation::NotSmoothPoint { components: through })),
    };
    let tangent = match &ss[component] {
        SSComponent::ConormalToPoint(_) => [
            [zero.clone(), zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), zero.clone(), one.clone()],
        ],
        comp => {
            let (h, omega) = comp.line_field().unwrap();
            let dh = [h.partial_derivative(0).evaluate(c), h.partial_derivative(1).evaluate(c)];
            if dh.iter().all(|v| v.is_zero()) {
                return Ok(Err(Refutation::SingularDivisor { component }));
            }
            let v = [dh[1].neg(), dh[0].clone()];
            let om = [omega[0].evaluate(c), omega[1].evaluate(c)];
            let i = if om[0].is_zero() { 1 } else { 0 };
            let lambda = df[i].div(&om[i]);
            let along = |w: &MultiPoly| {
                w.partial_derivative(0).evaluate(c).mul(&v[0]).add(&w.partial_derivative(1).evaluate(c).mul(&v[1])).mul(&lambda)
            };
            [
                [v[0].clone(), v[1].clone(), along(&omega[0]), along(&omega[1])],
                [zero.clone(), zero.clone(), om[0].clone(), om[1].clone()],
            ]
        }
    };
    let tangents = [graph[0].clone(), graph[1].clone(), tangent[0].clone(), tangent[1].clone()];
    let rows: Vec<Vec<Coefficient>> = tangents.iter().map(|r| r.to_vec()).collect();
    let det = determinant(&rows);
    if det.is_zero() {
        return Ok(Err(Refutation::NotTransverse { component }));
    }
    Ok(Ok(TtfunCertificate { component: Some(component), tangents: Some(tangents), determinant: Some(det), isolation }))
}

/// A one-parameter family `f_s = base + s·perturbation` of test functions at `ν`, all
/// congruent modulo `𝔪_P^level`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub base: RatFun,
    pub perturbation: RatFun,
    pub param: String,
    pub nu: CotangentPoint,
    pub level: u32,
}

impl FamilySpec {
    pub fn new(base: RatFun, perturbation: RatFun, nu: CotangentPoint, level: u32) -> Result<Self, SweepError> {
        let fam = FamilySpec { base, perturbation, param: "s".into(), nu, level };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<(), SweepError> {
        if self.param == GENERIC_POINT_PARAM {
            return Err(SweepError::InvalidFamily(format!("parameter name {GENERIC_POINT_PARAM} is reserved")));
        }
        if self.level < 2 {
            return Err(SweepError::InvalidFamily("the congruence level must be at least 2".into()));
        }
        let jet = jet_truncate_rational(&self.perturbation, &self.nu.point, self.level as u64)
            .map_err(|_| SweepError::InvalidFamily("the perturbation has a pole at the point".into()))?;
        if !jet.is_zero() {
            return Err(SweepError::InvalidFamily(format!("the perturbation is not in m_P^{}", self.level)));
        }
        Ok(())
    }

    pub fn slice(&self, value: &SliceValue) -> RatFun {
        let ring = self.base.ring();
        let s = match value {
            SliceValue::Zero => return self.base.clone(),
            SliceValue::Generic => Coefficient::param(ring.p(), &self.param),
            SliceValue::At(v) => v.clone(),
        };
        self.base.add(&self.perturbation.mul(&RatFun::poly(MultiPoly::constant(ring, s))))
    }
}

/// The family joining `f` (at `s = 1`) to its 2-jet at `P` (at `s = 0`).
pub fn connect_family(f: &RatFun, ss: &[SSComponent], nu: &CotangentPoint) -> Result<FamilySpec, SweepError> {
    is_ttfun(f, ss, nu)?.map_err(SweepError::NotTtfun)?;
    let jet = RatFun::poly(jet_truncate_rational(f, &nu.point, 3).map_err(|_| SweepError::PoleAtPoint)?);
    let rest = f.sub(&jet);
    FamilySpec::new(jet, rest, nu.clone(), 3)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SliceValue {
    Zero,
    /// `s` transcendental.
    Generic,
    At(Coefficient),
}

impl SliceValue {
    pub fn label(&self) -> String {
        match self {
            SliceValue::Zero => "0".into(),
            SliceValue::Generic => "generic".into(),
            SliceValue::At(c) => c.to_string(),
        }
    }

    /// `self` is a specialisation of `other`.
    fn specialises(&self, other: &SliceValue) -> bool {
        self == other || *other == SliceValue::Generic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fiber {
    /// `f_s = f_s(P)`.
    Special,
    /// `f_s = ρ`, `ρ` generic.
    Generic,
}

impl Fiber {
    pub fn label(self) -> &'static str {
        match self {
            Fiber::Special => "0",
            Fiber::Generic => "generic",
        }
    }
}

/// A failed cell, with a machine-readable code.
#[derive(Clone, Debug, PartialEq)]
pub struct CellError {
    pub code: &'static str,
    pub message: String,
}

impl From<SweepError> for CellError {
    fn from(e: SweepError) -> Self {
        CellError { code: e.code(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub slice: SliceValue,
    pub fiber: Fiber,
    pub report: Result<RamificationReport, CellError>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceRow {
    pub slice: SliceValue,
    pub f: RatFun,
    pub certificate: Result<TtfunCertificate, CellError>,
    pub dim_phi: Result<i64, CellError>,
    /// `dim φ` differs from the `s = 0` slice.
    pub jump: bool,
}

/// Special and generic fibers of every slice of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub p: u64,
    pub level: u32,
    pub rows: Vec<SliceRow>,
    /// Ordered slice by slice, special fiber first.
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn cell(&self, slice: &SliceValue, fiber: Fiber) -> Option<&RamificationReport> {
        self.cells.iter().find(|c| &c.slice == slice && c.fiber == fiber).and_then(|c| c.report.as_ref().ok())
    }

    pub fn swan(&self, slice: &SliceValue, fiber: Fiber) -> Option<u64> {
        self.cell(slice, fiber).map(|r| r.sw)
    }

    pub fn dim_phi(&self, slice: &SliceValue) -> Option<i64> {
        self.rows.iter().find(|r| &r.slice == slice).and_then(|r| r.dim_phi.as_ref().ok().copied())
    }

    pub fn any_jump(&self) -> bool {
        self.rows.iter().any(|r| r.jump)
    }

    /// Pairs of cells where `dimtot` grows under specialisation.
    pub fn semicontinuity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in &self.cells {
            for b in &self.cells {
                let special = a.slice.specialises(&b.slice) && (a.fiber == b.fiber || b.fiber == Fiber::Generic);
                if !special || (a.slice == b.slice && a.fiber == b.fiber) {
                    continue;
                }
                if let (Ok(ra), Ok(rb)) = (&a.report, &b.report) {
                    if ra.dimtot > rb.dimtot {
                        out.push(format!(
                            "(s={}, rho={}) has dimtot {} above (s={}, rho={}) with {}",
                            a.slice.label(),
                            a.fiber.label(),
                            ra.dimtot,
                            b.slice.label(),
                            b.fiber.label(),
                            rb.dimtot
                        ));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Slices at specific parameter values, besides `s = 0` and `s` generic.
    pub samples: Vec<Coefficient>,
    pub policy: PrecisionPolicy,
    pub generic: GenericFiber,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { samples: Vec::new(), policy: PrecisionPolicy::default(), generic: GenericFiber::Symbolic, parallel: true }
    }
}

fn sweep_slice(sheaf: &ASheafSpec, fam: &FamilySpec, ss: &[SSComponent], value: SliceValue, opts: &SweepOptions) -> (SliceRow, [SweepCell; 2]) {
    let f = fam.slice(&value);
    let certificate = match is_ttfun(&f, ss, &fam.nu) {
        Ok(Ok(c)) => Ok(c),
        Ok(Err(r)) => Err(SweepError::NotTtfun(r).into()),
        Err(e) => Err(e.into()),
    };
    let phi = dl_phi_dim(sheaf, &f, &fam.nu.point, &opts.generic, opts.policy).map_err(|e| CellError::from(SweepError::from(e)));
    let (special, generic, dim_phi) = match phi {
        Ok(r) => (Ok(r.special), Ok(r.generic), Ok(r.dim_phi)),
        Err(e) => (Err(e.clone()), Err(e.clone()), Err(e)),
    };
    let cells = [
        SweepCell { slice: value.clone(), fiber: Fiber::Special, report: special },
        SweepCell { slice: value.clone(), fiber: Fiber::Generic, report: generic },
    ];
    (SliceRow { slice: value, f, certificate, dim_phi, jump: false }, cells)
}

/// Vanishing-cycle data of every slice of a family; failures are recorded per cell.
pub fn sweep_family(sheaf: &ASheafSpec, fam: &FamilySpec, ss: &[SSComponent], opts: &SweepOptions) -> SweepTable {
    let mut values = vec![SliceValue::Zero, SliceValue::Generic];
    values.extend(opts.samples.iter().filter(|c| !c.is_zero()).cloned().map(SliceValue::At));
    let results: Vec<(SliceRow, [SweepCell; 2])> = if opts.parallel {
        values.into_par_iter().map(|v| sweep_slice(sheaf, fam, ss, v, opts)).collect()
    } else {
        values.into_iter().map(|v| sweep_slice(sheaf, fam, ss, v, opts)).collect()
    };
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (row, cs) in results {
        rows.push(row);
        cells.extend(cs);
    }
    let base = rows[0].dim_phi.as_ref().ok().copied();
    for row in rows.iter_mut() {
        row.jump = matches!((&row.dim_phi, base), (Ok(d), Some(b)) if *d != b);
    }
    SweepTable { p: sheaf.p(), level: fam.level, rows, cells }
}

/// Base test function `ξ·(x − a, y − b) + Q` for the first quadratic form `Q`, in a
/// fixed enumeration, that is certified.
pub fn find_base_ttfun(ss: &[SSComponent], nu: &CotangentPoint) -> Result<RatFun, SweepError> {
    let ring = nu.point.ring().clone();
    let p = ring.p();
    let c = nu.point.coords();
    let u = ring.var(&ring.vars()[0]).sub(&MultiPoly::constant(&ring, c[0].clone()));
    let v = ring.var(&ring.vars()[1]).sub(&MultiPoly::constant(&ring, c[1].clone()));
    let linear = u.scale(&nu.xi[0]).add(&v.scale(&nu.xi[1]));
    let quads = [u.mul(&v), u.pow(2), v.pow(2)];
    let mut triples: Vec<[u64; 3]> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for d in 0..p {
                if a + b + d > 0 {
                    triples.push([a, b, d]);
                }
            }
        }
    }
    triples.sort_by_key(|t| (t.iter().sum::<u64>(), std::cmp::Reverse(*t)));
    for t in triples {
        let mut f = linear.clone();
        for (k, q) in quads.iter().enumerate() {
            f = f.add(&q.scale(&Coefficient::from_u64(p, t[k])));
        }
        let f = RatFun::poly(f);
        if let Ok(Ok(_)) = is_ttfun(&f, ss, nu) {
            return Ok(f);
        }
    }
    Err(SweepError::NoTtfunFound)
}

#[derive(Clone, Debug)]
pub struct ProbeEvidence {
    /// Exponents of the probe monomial in `(x − a, y − b)`.
    pub monomial: Exps,
    pub level: u32,
    pub jump: bool,
    pub table: SweepTable,
}

/// Result of probing. `n_lower` is a lower bound for the depth: only the probed
/// families were tried.
#[derive(Clone, Debug)]
pub struct DepthEstimate {
    pub n_lower: u32,
    pub nmax: u32,
    pub base: RatFun,
    pub evidence: Vec<ProbeEvidence>,
    /// Some probe of level above `nmax` still jumped.
    pub saturated: bool,
}

impl DepthEstimate {
    pub fn semicontinuity_violations(&self) -> Vec<String> {
        self.evidence.iter().flat_map(|e| e.table.semicontinuity_violations()).collect()
    }
}

/// Monomials `x^a y^b` with `2 ≤ a + b ≤ nmax + 1`.
pub fn default_probes(nmax: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    for d in 2..=nmax + 1 {
        for a in (0..=d).rev() {
            out.push(Exps::from_slice(&[a, d - a]));
        }
    }
    out
}

/// Lower bound for the depth at `ν`: families `base + s·m` for probe monomials `m` of
/// degree `d` have congruence level `d`; the estimate is one more than the largest
/// level at which some probe jumps, and at least 2.
pub fn empirical_depth(
    sheaf: &ASheafSpec,
    ss: &[SSComponent],
    nu: &CotangentPoint,
    nmax: u32,
    probes: Option<&[Exps]>,
    opts: &SweepOptions,
) -> Result<DepthEstimate, SweepError> {
    let base = find_base_ttfun(ss, nu)?;
    let ring = nu.point.ring().clone();
    let c = nu.point.coords();
    let probes: Vec<Exps> = match probes {
        Some(ps) => ps.to_vec(),
        None => default_probes(nmax),
    };
    let shifted = |e: &Exps| {
        MultiPoly::monomial(&ring, e.clone(), Coefficient::one(ring.p())).compose(&[
            ring.var(&ring.vars()[0]).sub(&MultiPoly::constant(&ring, c[0].clone())),
            ring.var(&ring.vars()[1]).sub(&MultiPoly::constant(&ring, c[1].clone())),
        ])
    };
    let families: Vec<(Exps, FamilySpec)> = probes
        .iter()
        .map(|e| {
            let level = e.iter().sum::<u32>();
            FamilySpec::new(base.clone(), RatFun::poly(shifted(e)), nu.clone(), level).map(|f| (e.clone(), f))
        })
        .collect::<Result<_, _>>()?;
    let inner = SweepOptions { parallel: false, ..opts.clone() };
    let run = |(e, fam): &(Exps, FamilySpec)| {
        let table = sweep_family(sheaf, fam, ss, &inner);
        ProbeEvidence { monomial: e.clone(), level: fam.level, jump: table.any_jump(), table }
    };
    let evidence: Vec<ProbeEvidence> =
        if opts.parallel { families.par_iter().map(run).collect() } else { families.iter().map(run).collect() };
    let top = evidence.iter().filter(|e| e.jump).map(|e| e.level).max();
    let n_lower = top.map_or(2, |l| (l + 1).max(2));
    Ok(DepthEstimate { n_lower, nmax, base, saturated: n_lower > nmax + 1, evidence })
}

/// Total dimension of the vanishing cycles of a transverse test function by the Milnor
/// formula: minus the multiplicity of the component through `(P, ξ)` in the
/// characteristic cycle, read off as the total dimension on the generic fiber, times
/// the local intersection number of `Γ_df` with that component.
#[derive(Clone, Debug, PartialEq)]
pub struct MilnorReport {
    pub dimtot_phi: i64,
    pub dim_phi: i64,
    pub generic_dimtot: u64,
    pub intersection: u64,
}

pub fn dimtot_phi(
    sheaf: &ASheafSpec,
    f: &RatFun,
    ss: &[SSComponent],
    nu: &CotangentPoint,
    opts: &SweepOptions,
) -> Result<MilnorReport, SweepError> {
    let cert = is_ttfun(f, ss, nu)?.map_err(SweepError::NotTtfun)?;
    let phi = dl_phi_dim(sheaf, f, &nu.point, &opts.generic, opts.policy)?;
    let Some(k) = cert.component else {
        return Ok(MilnorReport { dimtot_phi: 0, dim_phi: phi.dim_phi, generic_dimtot: phi.generic.dimtot, intersection: 0 });
    };
    let i = cert
        .isolation
        .iter()
        .find(|(c, _)| *c == k)
        .and_then(|(_, m)| m.finite())
        .ok_or(SweepError::UnsupportedComponent(k))?;
    Ok(MilnorReport {
        dimtot_phi: -((phi.generic.dimtot * i) as i64),
        dim_phi: phi.dim_phi,
        generic_dimtot: phi.generic.dimtot,
        intersection: i,
    })
}
