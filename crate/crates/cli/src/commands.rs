use coulomb_momentum::radial::{RadialFunction, RadialKind};
use coulomb_momentum::spectrum::{bound_energy, bound_momentum_scale, level_degeneracy};
use coulomb_momentum::{CoulombContext, QuantumNumbers};
use serde_json::json;

use crate::args::{EnergiesArgs, Kind, RadialArgs, VerifyArgs};
use crate::error::CliError;
use crate::output::{OutputRecord, Row};
use crate::suite;

pub const MAX_LEVELS: u32 = 1000;

fn check_dim(dim: u32) -> Result<(), CliError> {
    if dim < 2 {
        return Err(CliError::usage(format!("--dim must be at least 2, got {dim}")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(CliError::usage(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Rows `(n, energy, q, degeneracy)` for `n = 1..=n_max`.
pub fn energies(args: &EnergiesArgs) -> Result<OutputRecord, CliError> {
    check_dim(args.dim)?;
    check_positive("--z", args.z)?;
    if args.n_max < 1 || args.n_max > MAX_LEVELS {
        return Err(CliError::usage(format!("--n-max must be in 1..={MAX_LEVELS}, got {}", args.n_max)));
    }
    let mut rows = Vec::with_capacity(args.n_max as usize);
    for n in 1..=args.n_max {
        let degeneracy = level_degeneracy(args.dim, n).map_err(|e| CliError::usage(e.to_string()))?;
        let degeneracy = u64::try_from(degeneracy)
            .map(|d| json!(d))
            .unwrap_or_else(|_| json!(degeneracy.to_string()));
        let mut row = Row::new();
        row.insert("n".into(), json!(n));
        row.insert("energy".into(), json!(bound_energy(args.dim, args.z, n)?));
        row.insert("q".into(), json!(bound_momentum_scale(args.dim, args.z, n)?));
        row.insert("degeneracy".into(), degeneracy);
        rows.push(row);
    }
    Ok(OutputRecord::table("energies", &["n", "energy", "q", "degeneracy"], rows))
}

fn radial_function(args: &RadialArgs) -> Result<RadialFunction, CliError> {
    check_dim(args.dim)?;
    check_positive("--z", args.z)?;
    let usage = |e: coulomb_momentum::Error| CliError::usage(e.to_string());
    match args.kind {
        Kind::Bound => {
            if args.q.is_some() || args.nr.is_some() {
                return Err(CliError::usage("--q and --nr apply to --kind sturmian only"));
            }
            let n = args.n.ok_or_else(|| CliError::usage("--kind bound requires --n"))?;
            let qn = QuantumNumbers::new(args.dim, n, args.l).map_err(usage)?;
            Ok(RadialFunction::bound(args.z, qn)?)
        }
        Kind::Sturmian => {
            let (q, nr) = match (args.q, args.nr) {
                (Some(q), Some(nr)) => (q, nr),
                _ => return Err(CliError::usage("--kind sturmian requires --q and --nr")),
            };
            check_positive("--q", q)?;
            let qn = QuantumNumbers::from_radial(args.dim, nr, args.l).map_err(usage)?;
            if let Some(n) = args.n {
                if n != qn.n {
                    return Err(CliError::usage(format!("--n {n} disagrees with --nr {nr} and --l {}", args.l)));
                }
            }
            let ctx = CoulombContext::from_momentum(args.z, q)?;
            Ok(RadialFunction::new(RadialKind::Sturmian, ctx, qn)?)
        }
    }
}

/// Rows `(p, value)` on `points` equally spaced momenta in `[p_min, p_max]`.
pub fn radial(args: &RadialArgs) -> Result<OutputRecord, CliError> {
    let f = radial_function(args)?;
    if !(args.p_min >= 0.0) || !args.p_max.is_finite() || args.p_max < args.p_min {
        return Err(CliError::usage("need 0 <= --p-min <= --p-max"));
    }
    if args.points == 0 || (args.points > 1 && args.p_max == args.p_min) {
        return Err(CliError::usage("--points must be 1, or --p-max must exceed --p-min"));
    }
    let step = if args.points > 1 {
        (args.p_max - args.p_min) / (args.points - 1) as f64
    } else {
        0.0
    };
    let rows = (0..args.points)
        .map(|k| {
            let p = if k + 1 == args.points && args.points > 1 {
                args.p_max
            } else {
                args.p_min + step * k as f64
            };
            let mut row = Row::new();
            row.insert("p".into(), json!(p));
            row.insert("value".into(), json!(f.eval(p)?));
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(OutputRecord::table("radial", &["p", "value"], rows))
}

pub fn verify(args: &VerifyArgs) -> Result<OutputRecord, CliError> {
    let reports = suite::run(args)?;
    Ok(OutputRecord::reports(&format!("verify {}", args.check.name()), reports))
}
