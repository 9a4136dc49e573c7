//! Routing of commands to the library and their JSON reports.

use clap::ValueEnum;
use conicdisc::exactalg::{Ring, Series, Valuation};
use conicdisc::familyscan::{
    delta_power_profile, discriminant_poly, is_generically_smooth, nonreg_equals_sigma_check_bounded,
    singular_points_scan_bounded, wildness_report, Family,
};
use conicdisc::fiberlab::{classify_fiber, field_normal_form, gram_rank, oracle_classify, FiberType};
use conicdisc::localforms::{
    artin_refine, central_fiber, classify_surface_singularity, normalize, normalize_extending, Verdict,
};
use conicdisc::quadform::{delta, sigma_generators, sigma_prime, TernaryForm};
use conicdisc::Error;
use serde_json::{json, Value};

use crate::input::{Base, InputDoc};

/// Largest total extension degree tried by `--auto-extend`.
pub const AUTO_EXTEND_MAX_DEGREE: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Delta,
    Sigma,
    SigmaPrime,
    ClassifyFiber,
    NormalForm,
    ClassifySing,
    SmoothScan,
    PowerProfile,
    NonregCheck,
    /// Run the built-in example corpus.
    Selftest,
    /// Run every case file in a directory.
    Corpus,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub ext_degree: Option<u32>,
    pub precision: Option<usize>,
    pub auto_extend: bool,
    pub max_points: Option<u64>,
}

/// A failed command: a stable code, a message and the exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: String,
    pub message: String,
    pub exit_code: i32,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: "InputError".into(), message: message.into(), exit_code: 1 }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let exit_code = match e {
            Error::InvalidField(_) | Error::RingMismatch | Error::ZeroForm => 1,
            _ => 2,
        };
        Failure { code: e.code().into(), message: e.to_string(), exit_code }
    }
}

/// The JSON printed for a command and the process exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub exit_code: i32,
}

impl From<Result<Value, Failure>> for Report {
    fn from(r: Result<Value, Failure>) -> Report {
        match r {
            Ok(json) => Report { json, exit_code: 0 },
            Err(f) => Report { json: f.to_json(), exit_code: f.exit_code },
        }
    }
}

pub fn run_command(cmd: Command, doc: &InputDoc, flags: &Flags) -> Report {
    execute(cmd, doc, flags).into()
}

pub fn execute(cmd: Command, doc: &InputDoc, flags: &Flags) -> Result<Value, Failure> {
    if flags.precision == Some(0) {
        return Err(Failure::input("--precision must be positive"));
    }
    if flags.ext_degree == Some(0) {
        return Err(Failure::input("--ext-degree must be at least 1"));
    }
    match cmd {
        Command::Delta => delta_cmd(doc, flags),
        Command::Sigma => on_any_form(doc, flags, |q| Ok(sigma_json(q)), |q| Ok(sigma_json(q)), |q| Ok(sigma_json(q))),
        Command::SigmaPrime => on_any_form(doc, flags, sigma_prime_json, sigma_prime_json, sigma_prime_json),
        Command::ClassifyFiber => classify_fiber_cmd(doc, flags),
        Command::NormalForm => normal_form_cmd(doc, flags),
        Command::ClassifySing => classify_sing_cmd(doc, flags),
        Command::SmoothScan => {
            let fam = family(doc, cmd)?;
            let rep = singular_points_scan_bounded(&fam, flags.ext_degree.unwrap_or(1), flags.max_points)?;
            Ok(serde_json::to_value(rep).expect("reports serialize"))
        }
        Command::PowerProfile => {
            let fam = family(doc, cmd)?;
            let prof = delta_power_profile(&fam)?;
            let mut v = serde_json::to_value(prof).expect("reports serialize");
            v["p"] = json!(fam.field.characteristic());
            Ok(v)
        }
        Command::NonregCheck => {
            let fam = family(doc, cmd)?;
            let rep = nonreg_equals_sigma_check_bounded(&fam, flags.ext_degree.unwrap_or(1), flags.max_points)?;
            Ok(serde_json::to_value(rep).expect("reports serialize"))
        }
        Command::Selftest | Command::Corpus => {
            Err(Failure::input(format!("{} does not take an input document", cmd.name())))
        }
    }
}

fn wrong_base(cmd: Command, doc: &InputDoc, wanted: &str) -> Failure {
    Failure::input(format!("{} needs {wanted}, the document has a {} base", cmd.name(), doc.base.kind()))
}

fn family(doc: &InputDoc, cmd: Command) -> Result<Family, Failure> {
    match doc.family() {
        Some(f) => Ok(f?),
        None => Err(wrong_base(cmd, doc, "a poly or proj-poly base")),
    }
}

fn series(doc: &InputDoc, flags: &Flags, cmd: Command) -> Result<TernaryForm<Series>, Failure> {
    match doc.series_form(flags.precision) {
        Some(q) => Ok(q?),
        None => Err(wrong_base(cmd, doc, "a series base or a specialized poly base")),
    }
}

/// Run one of three handlers depending on the base: field, series, or
/// polynomial (the family itself, never its specialization).
fn on_any_form(
    doc: &InputDoc,
    flags: &Flags,
    on_scalar: impl Fn(&TernaryForm<conicdisc::exactalg::Scalar>) -> Result<Value, Failure>,
    on_series: impl Fn(&TernaryForm<Series>) -> Result<Value, Failure>,
    on_poly: impl Fn(&TernaryForm<conicdisc::exactalg::Poly>) -> Result<Value, Failure>,
) -> Result<Value, Failure> {
    match &doc.base {
        Base::Field => on_scalar(&doc.scalar_form().expect("field base")),
        Base::Series { .. } => on_series(&doc.series_form(flags.precision).expect("series base")?),
        Base::Poly { .. } | Base::ProjPoly { .. } => on_poly(&doc.form),
    }
}

fn strings<R: Ring>(xs: &[R]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn sigma_json<R: Ring>(q: &TernaryForm<R>) -> Value {
    let g = sigma_generators(q);
    json!({ "sigma": strings(&g.0), "all_zero": g.all_zero() })
}

fn sigma_prime_json<R: Ring>(q: &TernaryForm<R>) -> Result<Value, Failure> {
    let s = sigma_prime(q)?;
    Ok(json!({ "sigma_prime": strings(&s), "all_zero": s.iter().all(|x| x.is_zero()) }))
}

pub fn valuation_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::AtLeastPrecision(n) => json!({ "at_least": n }),
    }
}

fn series_delta_json(q: &TernaryForm<Series>) -> Value {
    let d = delta(q);
    json!({ "delta": d.to_string(), "precision": d.precision(), "valuation": valuation_json(d.valuation()) })
}

fn delta_cmd(doc: &InputDoc, flags: &Flags) -> Result<Value, Failure> {
    match &doc.base {
        Base::Field => Ok(json!({ "delta": delta(&doc.scalar_form().expect("field base")).to_string() })),
        Base::Series { .. } => Ok(series_delta_json(&series(doc, flags, Command::Delta)?)),
        Base::Poly { .. } | Base::ProjPoly { .. } => {
            let fam = family(doc, Command::Delta)?;
            let w = wildness_report(&fam);
            let mut out = json!({
                "delta": discriminant_poly(&fam).to_string(),
                "generically_smooth": is_generically_smooth(&fam),
                "wild_candidate": w.wild_candidate,
                "notes": w.notes,
            });
            if let Some(sp) = &doc.specialize {
                let q = series(doc, flags, Command::Delta)?;
                let mut s = series_delta_json(&q);
                s["var"] = json!(sp.var);
                s["assignments"] =
                    sp.assignments.iter().map(|(v, x)| (v.clone(), json!(x.to_string()))).collect();
                s["field"] = json!(q.a.field().name());
                out["specialized"] = s;
            }
            Ok(out)
        }
    }
}

fn fiber_name(t: FiberType) -> Value {
    serde_json::to_value(t).expect("fiber types serialize")
}

fn classify_fiber_cmd(doc: &InputDoc, flags: &Flags) -> Result<Value, Failure> {
    let cmd = Command::ClassifyFiber;
    match &doc.base {
        Base::Field => {
            let q = doc.scalar_form().expect("field base");
            let t = classify_fiber(&q)?;
            let mut out = json!({ "fiber_type": fiber_name(t) });
            if q.a.field.is_finite() {
                out["oracle"] = fiber_name(oracle_classify(&q)?);
            }
            if q.a.field.characteristic() != 2 {
                out["gram_rank"] = json!(gram_rank(&q)?);
            }
            Ok(out)
        }
        Base::Series { .. } => {
            let q = series(doc, flags, cmd)?;
            let c = central_fiber(&q)?;
            Ok(json!({ "central_fiber": c.to_string(), "fiber_type": fiber_name(classify_fiber(&c)?) }))
        }
        _ => Err(wrong_base(cmd, doc, "a field or series base")),
    }
}

fn normal_form_cmd(doc: &InputDoc, flags: &Flags) -> Result<Value, Failure> {
    if let Some(q) = doc.scalar_form() {
        let nf = field_normal_form(&q)?;
        return Ok(json!({
            "tag": serde_json::to_value(nf.tag).expect("tags serialize"),
            "canonical": nf.canonical.to_string(),
            "transform": nf.transform.to_strings(),
            "unit": nf.unit.to_string(),
        }));
    }
    let q = series(doc, flags, Command::NormalForm)?;
    let (res, emb) = if flags.auto_extend {
        normalize_extending(&q, AUTO_EXTEND_MAX_DEGREE)?
    } else {
        (normalize(&q)?, None)
    };
    Ok(json!({
        "tag": res.tag.to_string(),
        "family": res.tag.name(),
        "n": res.tag.n(),
        "delta_degree": res.tag.delta_degree(),
        "central_reduced": res.tag.central_reduced(),
        "canonical_form": res.canonical_form.to_string(),
        "transform": res.transform.to_strings(),
        "unit": res.unit.to_string(),
        "precision": res.precision,
        "notes": res.notes,
        "field": res.unit.field().name(),
        "extension": emb.map(|e| json!({ "from": e.source.name(), "to": e.target.name() })),
    }))
}

fn verdict_json(v: Verdict) -> (String, String) {
    match v {
        Verdict::RegularTotalSpace => ("RegularTotalSpace".into(), "regular".into()),
        Verdict::UniqueA(n) => (format!("UniqueA({n})"), format!("A_{n}")),
        Verdict::TwoA1 => ("TwoA1".into(), "2A_1".into()),
        Verdict::UniqueD(n) => (format!("UniqueD({n})"), format!("D_{n}")),
    }
}

fn classify_sing_cmd(doc: &InputDoc, flags: &Flags) -> Result<Value, Failure> {
    let q = series(doc, flags, Command::ClassifySing)?;
    let fiber = classify_fiber(&central_fiber(&q)?)?;
    let d = delta(&q);
    let deg = match d.valuation() {
        Valuation::Finite(k) => k,
        Valuation::AtLeastPrecision(n) => {
            return Err(Error::PrecisionExhausted(format!("v_t(δ) ≥ {n}; raise --precision")).into())
        }
    };
    let reduced = fiber != FiberType::NonReduced;
    let rep = classify_surface_singularity(deg, reduced)?;
    let (verdict, singularity) = verdict_json(rep.verdict);
    let mut out = json!({
        "deg_delta": rep.deg_delta,
        "central_fiber": fiber_name(fiber),
        "central_reduced": rep.central_reduced,
        "m": rep.m,
        "verdict": verdict,
        "singularity": singularity,
    });
    if q.a.field().characteristic() == 2 && !reduced {
        if let Ok(l) = artin_refine(&q) {
            out["artin"] = json!({
                "label": l.label,
                "local_equation": l.artin_local_equation.map(|p| p.to_string()),
            });
        }
    }
    Ok(out)
}
