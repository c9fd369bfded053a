use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use super::{read_json, Outcome, RunConfig};
use crate::error::Result;
use crate::modular::{
    detect_modular_relation, j_eval, modular_polynomial, psi, reduce_to_fundamental_domain,
    special_point_parameter_height, SpecialSubvarietyModular, UpperHalfPoint,
};

#[derive(Subcommand, Debug)]
pub enum ModularCmd {
    /// j(z) by q-expansion after reduction to the fundamental domain.
    J {
        /// A point of the upper half plane, e.g. `0.1+1.2i`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Reduce z into the standard fundamental domain of SL2(Z).
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// The modular polynomial Phi_N with exact integer coefficients.
    Phi {
        #[arg(long)]
        level: u32,
    },
    /// Complexity and parameter height of a special subvariety of Y(1)^n.
    Complexity { spec: PathBuf },
    /// Smallest N <= nmax with Phi_N(j(z1), j(z2)) numerically zero.
    Relate {
        #[arg(long, allow_hyphen_values = true)]
        z1: String,
        #[arg(long, allow_hyphen_values = true)]
        z2: String,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

impl ModularCmd {
    pub fn name(&self) -> &'static str {
        match self {
            ModularCmd::J { .. } => "j",
            ModularCmd::Reduce { .. } => "reduce",
            ModularCmd::Phi { .. } => "phi",
            ModularCmd::Complexity { .. } => "complexity",
            ModularCmd::Relate { .. } => "relate",
        }
    }
}

pub fn run(cmd: &ModularCmd, config: &mut RunConfig) -> Result<Outcome> {
    let prec = config.precision_bits;
    match cmd {
        ModularCmd::J { z } => {
            let z = UpperHalfPoint::parse(prec, z)?;
            let v = j_eval(&z, prec)?;
            Ok(Outcome::json(json!({
                "z": config.complex(z.value()),
                "j": config.complex(&v.value),
                "reduced": config.complex(v.reduced.value()),
                "gamma": v.gamma,
                "terms": v.terms,
                "tail_bound": crate::numeric::fmt_real(&v.tail_bound, 6),
                "working_precision_bits": v.working_precision_bits,
            })))
        }
        ModularCmd::Reduce { z } => {
            let z = UpperHalfPoint::parse(prec, z)?;
            let (w, g) = reduce_to_fundamental_domain(&z)?;
            Ok(Outcome::json(json!({
                "z": config.complex(z.value()),
                "reduced": config.complex(w.value()),
                "gamma": g,
                "in_fundamental_domain": w.is_in_fundamental_domain(),
            })))
        }
        ModularCmd::Phi { level } => {
            config.bound("level", *level as u64)?;
            let phi = modular_polynomial(*level)?;
            let mut v = serde_json::to_value(&*phi)?;
            v["degree"] = json!(psi(*level));
            v["symmetry"] = json!(if phi.is_symmetric() {
                "symmetric"
            } else if phi.is_antisymmetric() {
                "antisymmetric"
            } else {
                "none"
            });
            Ok(Outcome::json(v))
        }
        ModularCmd::Complexity { spec } => {
            let s: SpecialSubvarietyModular = read_json(spec)?;
            Ok(Outcome::json(json!({
                "special": s,
                "dim": s.dim(),
                "complexity": s.complexity().to_string(),
                "parameter_height": special_point_parameter_height(&s),
            })))
        }
        ModularCmd::Relate { z1, z2, nmax, tolerance } => {
            let a = UpperHalfPoint::parse(prec, z1)?;
            let b = UpperHalfPoint::parse(prec, z2)?;
            let tol = config.tolerance("relation", *tolerance)?;
            config.bound("nmax", *nmax as u64)?;
            let r = detect_modular_relation(&a, &b, *nmax, tol)?;
            Ok(Outcome::json(json!({
                "z1": config.complex(a.value()),
                "z2": config.complex(b.value()),
                "relation": r,
                "heuristic": true,
            })))
        }
    }
}
