use std::io::Read;
use std::path::Path;

use monenv_core::oracle::tightness_comparison;
use monenv_core::{BranchKind, EnvelopeKind, Error, Monomial, MonomialInstance, VolumeOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    BranchArgs, CheckArgs, Command, Common, CompareArgs, Criterion, EvalArgs, Family, Format,
    LevelsetArgs, OracleSpec, SetName, VolumeArgs,
};
use crate::output::{csv_number, render};

/// Failure of a command, classified for the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Instance(String),
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_) => 1,
            Self::Usage(_) => 2,
            Self::Instance(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Numerical(_) => "numerical",
            Self::Usage(_) => "usage",
            Self::Instance(_) => "invalid_instance",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Instance(m) | Self::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::InvalidInstance(_)
            | Error::Schema(_)
            | Error::RequiresTwoVariables(_)
            | Error::RequiresBilinear => Self::Instance(message),
            Error::NoConvergence { .. } => Self::Numerical(message),
            _ => Self::Usage(message),
        }
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &Path) -> Result<Monomial, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Instance(format!("cannot read standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Instance(format!("cannot read {}: {e}", path.display())))?
    };
    Ok(Monomial::new(MonomialInstance::from_json(&text)?)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialise to JSON")
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Params(a) => params(a),
        Command::Eval(a) => eval(a),
        Command::Check(a) => check(a),
        Command::Volume(a) => volume(a),
        Command::Branch(a) => branch(a),
        Command::Levelset(a) => levelset(a),
        Command::Compare(a) => compare(a),
    }
}

fn params(a: Common) -> Outcome {
    let m = load(&a.instance)?;
    let (cone, w) = (m.cone_params(), m.wedge_params());
    let report = m.identity_report();
    let value = json!({
        "z0": cone.z0,
        "gamma": cone.gamma,
        "beta": m.beta(),
        "regime": to_value(&m.regime()),
        "d_i": w.d_i,
        "d_j": w.d_j,
        "eta_i": w.eta_i,
        "eta_j": w.eta_j,
        "lambda": w.lambda,
        "zeta": w.zeta,
        "sigma": w.sigma,
        "tau": w.tau,
        "phi_i": w.phi_i,
        "phi_j": w.phi_j,
        "identities_ok": report.ok,
        "identities": to_value(&report),
    });
    Ok(render(&value, a.format))
}

fn eval(a: EvalArgs) -> Outcome {
    let m = load(&a.common.instance)?;
    let x = &a.point;
    let mut value = json!({
        "f": m.eval_f(x)?,
        "upper_env": m.upper_env_value(x)?,
        "lower_env": m.lower_env_value(x)?,
    });
    if let Some(z) = a.with_z {
        let kind = if m.n() == 2 {
            EnvelopeKind::Hull2D
        } else {
            EnvelopeKind::UpperWedge
        };
        value["z"] = json!(z);
        value["set"] = to_value(&kind);
        value["membership"] = to_value(&m.membership(kind, x, z)?);
    }
    Ok(render(&value, a.common.format))
}

fn check(a: CheckArgs) -> Outcome {
    let m = load(&a.common.instance)?;
    let kind = match a.set {
        SetName::Hull => EnvelopeKind::Hull2D,
        SetName::Y => EnvelopeKind::YProjection,
        SetName::Upper => EnvelopeKind::UpperWedge,
        SetName::Lower => EnvelopeKind::LowerWedge2D,
        SetName::Orthant => EnvelopeKind::UpperOrthant,
    };
    let z = match (kind, a.z) {
        (EnvelopeKind::YProjection, z) => z.unwrap_or(f64::NAN),
        (_, Some(z)) => z,
        (_, None) => return Err(Failure::Usage("--z is required unless --set Y".into())),
    };
    let verdict = m.membership(kind, &a.point, z)?;
    Ok(render(&to_value(&verdict), a.common.format))
}

fn volume(a: VolumeArgs) -> Outcome {
    let m = load(&a.common.instance)?;
    let mut options = VolumeOptions::default();
    for oracle in &a.oracle {
        match *oracle {
            OracleSpec::Quadrature => options.quadrature = true,
            OracleSpec::MonteCarlo { seed, samples } => options.monte_carlo = Some((seed, samples)),
        }
    }
    Ok(render(&to_value(&m.volume(options)?), a.common.format))
}

fn branch(a: BranchArgs) -> Outcome {
    let m = load(&a.common.instance)?;
    let value = match (a.criterion, a.family) {
        (Criterion::Balanced, Family::Both) => json!({
            "ratio": to_value(&m.balanced_point(BranchKind::Ratio, a.tol)?),
            "value": to_value(&m.balanced_point(BranchKind::Value, a.tol)?),
        }),
        (Criterion::Balanced, family) => to_value(&m.balanced_point(kind_of(family), a.tol)?),
        (Criterion::Minvol, Family::Both) => to_value(&m.min_volume_branch(a.epsilon, a.tol)?),
        (Criterion::Minvol, family) => {
            to_value(&m.min_volume_by_kind(kind_of(family), a.epsilon, a.tol)?)
        }
    };
    Ok(render(&value, a.common.format))
}

fn kind_of(family: Family) -> BranchKind {
    match family {
        Family::Ratio => BranchKind::Ratio,
        Family::Value | Family::Both => BranchKind::Value,
    }
}

fn levelset(a: LevelsetArgs) -> Outcome {
    let m = load(&a.instance)?;
    let curves =
        a.xi.iter()
            .map(|&xi| m.level_curve(xi, a.points))
            .collect::<Result<Vec<_>, _>>()?;
    match a.format {
        Format::Json => Ok(render(&to_value(&curves), Format::Json)),
        Format::Csv => {
            let mut out = String::from("xi,x1,x2,on_P,on_Q\n");
            for c in &curves {
                let last = c.points.len() - 1;
                for (k, [x1, x2]) in c.points.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        csv_number(c.xi),
                        csv_number(*x1),
                        csv_number(*x2),
                        k == 0,
                        k == last
                    ));
                }
            }
            Ok(out)
        }
    }
}

fn compare(a: CompareArgs) -> Outcome {
    let m = load(&a.common.instance)?;
    Ok(render(
        &to_value(&tightness_comparison(&m, a.grid)?),
        a.common.format,
    ))
}
