//! Executes the tasks of a manifest against the core library.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value as Json};

use ramlab_core::blowup::{resolve_curve, ChartAutomorphism};
use ramlab_core::bounds::{codifferent_r_s, depth_bound, ep, fixed_ideal, EpMode};
use ramlab_core::exactalg::{Coefficient, Exps, MultiPoly, RatFun, Ring};
use ramlab_core::ideals::IdealHandle;
use ramlab_core::localgeom::{CurveGerm, PlanarPoint};
use ramlab_core::ramification::{dl_phi_dim, gos_euler_line, swan_on_curve, ASheafSpec, GenericFiber, Line, PrecisionPolicy};
use ramlab_core::sweep::{
    dimtot_phi, empirical_depth, is_ttfun, sweep_family, CotangentPoint, FamilySpec, SSComponent, SweepOptions, SweepTable,
};

use crate::manifest::{Expr, Manifest, SsDecl, TaskDecl, TaskKind, Value};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub policy: PrecisionPolicy,
    pub parallel: bool,
    /// Enables randomized cross-checks (extra sampled slices and generic points).
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { policy: PrecisionPolicy::default(), parallel: true, seed: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskError {
    pub code: String,
    pub message: String,
}

fn fail(code: &str, message: impl Into<String>) -> TaskError {
    TaskError { code: code.into(), message: message.into() }
}

macro_rules! coded {
    ($e:expr) => {
        $e.map_err(|e| fail(e.code(), e.to_string()))
    };
}

/// A CSV table: header row first.
pub type Table = Vec<Vec<String>>;

#[derive(Clone, Debug)]
pub struct TaskOutcome {
    pub index: usize,
    pub kind: TaskKind,
    pub result: Result<Map<String, Json>, TaskError>,
    pub table: Option<Table>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub p: u64,
    pub tasks: Vec<TaskOutcome>,
}

impl RunReport {
    pub fn any_error(&self) -> bool {
        self.tasks.iter().any(|t| t.result.is_err())
    }
}

fn s(x: impl ToString) -> Json {
    Json::String(x.to_string())
}

struct Context<'a> {
    manifest: &'a Manifest,
    ring: Ring,
    opts: &'a RunOptions,
    /// Results usable by `auto` arguments of later tasks.
    last_rs: Option<(u64, u64)>,
    ep_max: Option<u64>,
}

impl Context<'_> {
    fn eval_in(&self, e: &Expr, ring: &Ring) -> Result<RatFun, TaskError> {
        Ok(match e {
            Expr::Int(n) => RatFun::poly(MultiPoly::constant(ring, Coefficient::from_u64(ring.p(), *n))),
            Expr::Var(v) if ring.index_of(v).is_some() => RatFun::poly(ring.var(v)),
            Expr::Var(v) if self.manifest.params.contains(v) => RatFun::poly(ring.param(v)),
            Expr::Var(v) => return Err(fail("undeclared-variable", format!("`{v}` is not available here"))),
            Expr::Neg(a) => RatFun::poly(ring.zero()).sub(&self.eval_in(a, ring)?),
            Expr::Add(a, b) => self.eval_in(a, ring)?.add(&self.eval_in(b, ring)?),
            Expr::Sub(a, b) => self.eval_in(a, ring)?.sub(&self.eval_in(b, ring)?),
            Expr::Mul(a, b) => self.eval_in(a, ring)?.mul(&self.eval_in(b, ring)?),
            Expr::Div(a, b) => {
                let d = self.eval_in(b, ring)?;
                if d.num.is_zero() {
                    return Err(fail("division-by-zero", format!("`{b}` vanishes identically")));
                }
                self.eval_in(a, ring)?.div(&d)
            }
            Expr::Pow(a, k) => {
                let b = self.eval_in(a, ring)?;
                RatFun::new(b.num.pow(*k as u64), b.den.pow(*k as u64))
            }
        })
    }

    fn rat(&self, e: &Expr) -> Result<RatFun, TaskError> {
        self.eval_in(e, &self.ring)
    }

    fn poly_in(&self, e: &Expr, ring: &Ring) -> Result<MultiPoly, TaskError> {
        let f = self.eval_in(e, ring)?;
        match f.den.as_constant() {
            Some(c) => Ok(f.num.scale(&c.inv())),
            None => Err(fail("not-polynomial", format!("`{e}` must be a polynomial"))),
        }
    }

    fn poly(&self, e: &Expr) -> Result<MultiPoly, TaskError> {
        self.poly_in(e, &self.ring)
    }

    fn constant(&self, e: &Expr) -> Result<Coefficient, TaskError> {
        self.poly(e)?.as_constant().ok_or_else(|| fail("not-constant", format!("`{e}` must be a constant")))
    }

    fn pair(&self, v: &Value) -> Result<[Coefficient; 2], TaskError> {
        let Value::List(l) = v else { unreachable!("pairs are lists") };
        Ok([self.constant(&l[0])?, self.constant(&l[1])?])
    }

    fn point(&self, t: &TaskDecl) -> Result<PlanarPoint, TaskError> {
        let [a, b] = self.pair(t.get("at").expect("required"))?;
        coded!(PlanarPoint::new(&self.ring, a, b))
    }

    fn cotangent(&self, t: &TaskDecl) -> Result<CotangentPoint, TaskError> {
        Ok(CotangentPoint::new(self.point(t)?, self.pair(t.get("xi").expect("required"))?))
    }

    fn sheaf(&self) -> Result<ASheafSpec, TaskError> {
        let decl = self.manifest.sheaf.as_ref().ok_or_else(|| fail("no-sheaf", "this task needs a `sheaf` declaration"))?;
        coded!(ASheafSpec::new(self.rat(&decl.g)?, self.poly(&decl.h)?))
    }

    fn ss(&self) -> Result<Vec<SSComponent>, TaskError> {
        self.manifest
            .ss
            .iter()
            .map(|c| {
                Ok(match c {
                    SsDecl::Zero => SSComponent::ZeroSection,
                    SsDecl::Conormal { h } => SSComponent::ConormalToDivisor(self.poly(h)?),
                    SsDecl::Point { at } => SSComponent::ConormalToPoint(coded!(PlanarPoint::new(
                        &self.ring,
                        self.constant(&at[0])?,
                        self.constant(&at[1])?
                    ))?),
                    SsDecl::LineField { h, omega } => {
                        SSComponent::LineFieldAlongDivisor { h: self.poly(h)?, omega: [self.poly(&omega[0])?, self.poly(&omega[1])?] }
                    }
                })
            })
            .collect()
    }

    fn expr<'t>(&self, t: &'t TaskDecl, key: &str) -> &'t Expr {
        match t.get(key) {
            Some(Value::Expr(e)) => e,
            _ => unreachable!("`{key}` is a required expression"),
        }
    }

    fn list<'t>(&self, t: &'t TaskDecl, key: &str) -> Option<&'t [Expr]> {
        match t.get(key) {
            Some(Value::List(l)) => Some(l),
            Some(Value::Expr(_)) => unreachable!("lists parse as lists"),
            None => None,
        }
    }

    fn int(&self, t: &TaskDecl, key: &str) -> Result<i64, TaskError> {
        self.expr(t, key).as_int().ok_or_else(|| fail("invalid-argument", format!("`{key}` must be an integer")))
    }

    fn sweep_options(&self, samples: Vec<Coefficient>) -> SweepOptions {
        SweepOptions { samples, policy: self.opts.policy, parallel: self.opts.parallel, ..SweepOptions::default() }
    }

    fn rng(&self, index: usize) -> Option<StdRng> {
        self.opts.seed.map(|seed| StdRng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }
}

/// Runs every task in order; later tasks may use `auto` values from earlier ones.
pub fn run_manifest(manifest: &Manifest, opts: &RunOptions) -> RunReport {
    let vars: Vec<&str> = manifest.ring.iter().map(String::as_str).collect();
    let mut cx = Context { manifest, ring: Ring::new(manifest.p, &vars), opts, last_rs: None, ep_max: None };
    let mut tasks = Vec::new();
    for (i, t) in manifest.tasks.iter().enumerate() {
        let start = Instant::now();
        let (result, table) = match run_task(&mut cx, i + 1, t) {
            Ok((m, table)) => (Ok(m), table),
            Err(e) => (Err(e), None),
        };
        tasks.push(TaskOutcome { index: i + 1, kind: t.kind, result, table, elapsed: start.elapsed() });
    }
    RunReport { p: manifest.p, tasks }
}

type TaskResult = Result<(Map<String, Json>, Option<Table>), TaskError>;

fn obj(v: Json) -> Map<String, Json> {
    match v {
        Json::Object(m) => m,
        _ => unreachable!("built from json!({{..}})"),
    }
}

fn run_task(cx: &mut Context, index: usize, t: &TaskDecl) -> TaskResult {
    match t.kind {
        TaskKind::Swan => {
            let sheaf = cx.sheaf()?;
            let curve = CurveGerm::Implicit { f: cx.poly(cx.expr(t, "curve"))?, point: cx.point(t)? };
            let r = coded!(swan_on_curve(&sheaf, &curve, cx.opts.policy))?;
            Ok((
                obj(json!({
                    "sw": s(r.sw), "rank": s(r.rank), "dimtot": s(r.dimtot),
                    "raw_pole_order": s(r.raw_pole_order), "perfection_level": s(r.perfection_level),
                    "unramified": r.unramified, "precision": s(r.precision),
                })),
                None,
            ))
        }
        TaskKind::PhiDim => {
            let sheaf = cx.sheaf()?;
            let f = cx.rat(cx.expr(t, "f"))?;
            let pt = cx.point(t)?;
            let mode = match t.get("eta") {
                Some(_) => GenericFiber::Sampled(Coefficient::from_i64(cx.ring.p(), cx.int(t, "eta")?)),
                None => GenericFiber::Symbolic,
            };
            let r = coded!(dl_phi_dim(&sheaf, &f, &pt, &mode, cx.opts.policy))?;
            let mut m = obj(json!({
                "special_sw": s(r.special.sw), "generic_sw": s(r.generic.sw),
                "special_dimtot": s(r.special.dimtot), "generic_dimtot": s(r.generic.dimtot),
                "dim_phi": s(r.dim_phi), "rho": s(&r.rho), "generic_point": s(&r.generic_point),
            }));
            if let (Some(mut rng), GenericFiber::Symbolic) = (cx.rng(index), &mode) {
                let eta = Coefficient::from_u64(cx.ring.p(), rng.gen_range(1..cx.ring.p()));
                let check = dl_phi_dim(&sheaf, &f, &pt, &GenericFiber::Sampled(eta.clone()), cx.opts.policy);
                let check = match check {
                    Ok(c) => json!({ "eta": s(&eta), "dim_phi": s(c.dim_phi) }),
                    Err(e) => json!({ "eta": s(&eta), "error": s(e.code()) }),
                };
                m.insert("sampled_check".into(), check);
            }
            Ok((m, None))
        }
        TaskKind::Sweep => {
            let sheaf = cx.sheaf()?;
            let ss = cx.ss()?;
            let nu = cx.cotangent(t)?;
            let level = u32::try_from(cx.int(t, "level")?).map_err(|_| fail("invalid-argument", "`level` must be positive"))?;
            let fam = coded!(FamilySpec::new(cx.rat(cx.expr(t, "f"))?, cx.rat(cx.expr(t, "perturb"))?, nu, level))?;
            let mut samples: Vec<Coefficient> =
                cx.list(t, "samples").unwrap_or(&[]).iter().map(|e| cx.constant(e)).collect::<Result<_, _>>()?;
            if let Some(mut rng) = cx.rng(index) {
                samples.push(Coefficient::from_u64(cx.ring.p(), rng.gen_range(1..cx.ring.p())));
            }
            let mut seen = Vec::new();
            samples.retain(|c| !seen.contains(c) && {
                seen.push(c.clone());
                true
            });
            let table = sweep_family(&sheaf, &fam, &ss, &cx.sweep_options(samples));
            Ok((sweep_json(&table), Some(sweep_csv(&table))))
        }
        TaskKind::Resolve => {
            let tree = coded!(resolve_curve(&cx.poly(cx.expr(t, "curve"))?, &cx.point(t)?))?;
            coded!(tree.check_multiplicity_bound())?;
            Ok((
                obj(json!({
                    "curve": s(&tree.curve), "multiplicity": s(tree.multiplicity), "stages": s(tree.stages),
                    "m1": s(tree.m1), "non_reduced": tree.non_reduced, "charts": s(tree.charts.len()),
                    "blowups": s(tree.nodes.len()), "leaves": s(tree.leaves().len()),
                    "multiplicity_bound": "ok",
                })),
                None,
            ))
        }
        TaskKind::Ep => {
            let ring = match cx.list(t, "vars") {
                Some(vs) => {
                    let names: Vec<String> = vs.iter().map(|e| e.to_string()).collect();
                    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                    Ring::new(cx.ring.p(), &refs)
                }
                None => cx.ring.clone(),
            };
            let polys = |l: &[Expr]| l.iter().map(|e| cx.poly_in(e, &ring)).collect::<Result<Vec<_>, _>>();
            let ideal = match (cx.list(t, "ideal"), cx.list(t, "automorphism")) {
                (Some(gens), _) => IdealHandle::new(&ring, polys(gens)?),
                (None, Some(images)) => {
                    let im = polys(images)?;
                    if im.len() != ring.nvars() {
                        return Err(fail("invalid-argument", "`automorphism` needs one image per variable"));
                    }
                    fixed_ideal(&ChartAutomorphism::from_polys([im[0].clone(), im[1].clone()])).ideal
                }
                (None, None) => unreachable!("checked by the parser"),
            };
            let mode = match cx.list(t, "radical") {
                Some(gens) => EpMode::Assisted(IdealHandle::new(&ring, polys(gens)?)),
                None => EpMode::Exact,
            };
            let r = coded!(ep(&ideal, &mode))?;
            cx.ep_max = Some(cx.ep_max.map_or(r.ep, |m| m.max(r.ep)));
            Ok((
                obj(json!({
                    "ideal": s(&ideal), "ep": s(r.ep), "radical": s(&r.radical), "radical_assumed": r.radical_assumed,
                })),
                None,
            ))
        }
        TaskKind::Codifferent => {
            let Expr::Var(var) = cx.expr(t, "var") else { unreachable!("identifier") };
            let big = cx.ring.with_var(var);
            let f = cx.poly_in(cx.expr(t, "f"), &big)?;
            let g = cx.poly(cx.expr(t, "divisor"))?;
            let r = coded!(codifferent_r_s(&f, var, &g, &cx.point(t)?))?;
            cx.last_rs = Some((r.r, r.s));
            Ok((
                obj(json!({
                    "f": s(&r.f), "delta": s(&r.delta), "divisor": s(&r.divisor), "annihilator": s(&r.annihilator),
                    "r": s(r.r), "s": s(r.s), "warnings": r.warnings,
                })),
                None,
            ))
        }
        TaskKind::DepthBound => {
            let auto = |key: &str| matches!(cx.expr(t, key), Expr::Var(_));
            let need = |v: Option<u64>, what: &str| {
                v.ok_or_else(|| fail("missing-dependency", format!("`{what} = auto` needs an earlier task computing it")))
            };
            let nonneg = |key: &str| -> Result<u64, TaskError> {
                u64::try_from(cx.int(t, key)?).map_err(|_| fail("invalid-argument", format!("`{key}` must be non-negative")))
            };
            let epv = if auto("ep") { need(cx.ep_max, "ep")? } else { nonneg("ep")? };
            let r = if auto("r") { need(cx.last_rs.map(|x| x.0), "r")? } else { nonneg("r")? };
            let sv = if auto("s") { need(cx.last_rs.map(|x| x.1), "s")? } else { nonneg("s")? };
            let b = coded!(depth_bound(cx.ring.p(), nonneg("group")?, nonneg("ix")?, epv, r, sv))?;
            Ok((
                obj(json!({
                    "p": s(b.p), "group": s(b.group_order), "ix": s(b.i_x), "ep": s(b.ep_max), "r": s(b.r), "s": s(b.s),
                    "M": s(b.m), "M1": s(&b.m1), "M2": s(&b.m2), "N": s(&b.n),
                })),
                None,
            ))
        }
        TaskKind::EmpiricalDepth => {
            let sheaf = cx.sheaf()?;
            let ss = cx.ss()?;
            let nu = cx.cotangent(t)?;
            let nmax = u32::try_from(cx.int(t, "nmax")?).map_err(|_| fail("invalid-argument", "`nmax` must be non-negative"))?;
            let probes: Option<Vec<Exps>> = match cx.list(t, "probes") {
                Some(l) => Some(l.iter().map(|e| monomial(cx, e)).collect::<Result<_, _>>()?),
                None => None,
            };
            let est = coded!(empirical_depth(&sheaf, &ss, &nu, nmax, probes.as_deref(), &cx.sweep_options(Vec::new())))?;
            let ring = &cx.ring;
            let mono = |e: &Exps| MultiPoly::monomial(ring, e.clone(), Coefficient::one(ring.p())).to_string();
            let evidence: Vec<Json> = est
                .evidence
                .iter()
                .map(|ev| json!({ "probe": mono(&ev.monomial), "level": s(ev.level), "jump": ev.jump }))
                .collect();
            let mut table = vec![vec!["probe".into(), "level".into(), "jump".into()]];
            for ev in &est.evidence {
                table.push(vec![mono(&ev.monomial), ev.level.to_string(), ev.jump.to_string()]);
            }
            Ok((
                obj(json!({
                    "n_lower": s(est.n_lower), "nmax": s(est.nmax), "base": s(&est.base), "saturated": est.saturated,
                    "evidence": evidence, "semicontinuity_violations": est.semicontinuity_violations(),
                })),
                Some(table),
            ))
        }
        TaskKind::TtfunCheck => {
            let ss = cx.ss()?;
            let f = cx.rat(cx.expr(t, "f"))?;
            let nu = cx.cotangent(t)?;
            match coded!(is_ttfun(&f, &ss, &nu))? {
                Ok(cert) => {
                    let mut m = obj(json!({
                        "verdict": "transverse",
                        "component": cert.component.map_or(Json::Null, s),
                        "determinant": cert.determinant.as_ref().map_or(Json::Null, s),
                        "isolation": cert.isolation.iter().map(|(c, n)| json!({ "component": s(c), "intersection": s(n) })).collect::<Vec<_>>(),
                    }));
                    if cx.manifest.sheaf.is_some() {
                        let sheaf = cx.sheaf()?;
                        let mr = coded!(dimtot_phi(&sheaf, &f, &ss, &nu, &cx.sweep_options(Vec::new())))?;
                        m.insert("dimtot_phi".into(), s(mr.dimtot_phi));
                        m.insert("dim_phi".into(), s(mr.dim_phi));
                    }
                    Ok((m, None))
                }
                Err(refutation) => Ok((obj(json!({ "verdict": "refuted", "reason": s(&refutation) })), None)),
            }
        }
        TaskKind::GosLine => {
            let sheaf = cx.sheaf()?;
            let l = cx.poly(cx.expr(t, "line"))?;
            if l.total_degree() > 1 {
                return Err(fail("not-linear", format!("`{l}` is not linear")));
            }
            let line = Line { alpha: l.coeff(&[1, 0]), beta: l.coeff(&[0, 1]), gamma: l.coeff(&[0, 0]) };
            let r = coded!(gos_euler_line(&sheaf, &line, cx.opts.policy))?;
            let boundary: Vec<Json> = r
                .boundary
                .iter()
                .map(|b| json!({ "t": b.t.as_ref().map_or_else(|| s("infinity"), s), "sw": s(b.sw) }))
                .collect();
            Ok((obj(json!({ "chi": s(r.chi), "boundary": boundary })), None))
        }
    }
}

fn monomial(cx: &Context, e: &Expr) -> Result<Exps, TaskError> {
    let m = cx.poly(e)?;
    let lead = m.terms().next().filter(|(_, c)| m.num_terms() == 1 && c.is_one()).map(|(exps, _)| exps.clone());
    lead.ok_or_else(|| fail("invalid-argument", format!("probe `{e}` is not a monic monomial")))
}

fn sweep_json(table: &SweepTable) -> Map<String, Json> {
    let cells: Vec<Json> = table
        .cells
        .iter()
        .map(|c| match &c.report {
            Ok(r) => json!({ "s": c.slice.label(), "rho": c.fiber.label(), "sw": s(r.sw), "dimtot": s(r.dimtot) }),
            Err(e) => json!({ "s": c.slice.label(), "rho": c.fiber.label(), "error": { "code": e.code, "message": e.message } }),
        })
        .collect();
    let slices: Vec<Json> = table
        .rows
        .iter()
        .map(|r| {
            let mut m = obj(json!({ "s": r.slice.label(), "f": s(&r.f), "jump": r.jump }));
            match &r.dim_phi {
                Ok(d) => m.insert("dim_phi".into(), s(d)),
                Err(e) => m.insert("dim_phi_error".into(), s(e.code)),
            };
            match &r.certificate {
                Ok(_) => m.insert("ttfun".into(), Json::Bool(true)),
                Err(e) => m.insert("ttfun_error".into(), s(e.code)),
            };
            Json::Object(m)
        })
        .collect();
    obj(json!({
        "level": s(table.level), "cells": cells, "slices": slices, "jump": table.any_jump(),
        "semicontinuity_violations": table.semicontinuity_violations(),
    }))
}

/// One row per cell: slices in table order, special fiber (`rho = 0`) before generic.
fn sweep_csv(table: &SweepTable) -> Table {
    let mut out = vec!["s,rho,sw,dimtot,dim_phi,status".split(',').map(String::from).collect()];
    for row in &table.rows {
        for c in table.cells.iter().filter(|c| c.slice == row.slice) {
            let dim_phi = row.dim_phi.as_ref().map(|d| d.to_string()).unwrap_or_default();
            out.push(match &c.report {
                Ok(r) => vec![c.slice.label(), c.fiber.label().into(), r.sw.to_string(), r.dimtot.to_string(), dim_phi, "ok".into()],
                Err(e) => vec![c.slice.label(), c.fiber.label().into(), String::new(), String::new(), dim_phi, e.code.into()],
            });
        }
    }
    out
}
