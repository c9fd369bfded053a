use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde::Deserialize;
use serde_json::json;

use super::{read_json, Outcome, RunConfig};
use crate::algebraic::AlgebraicNumber;
use crate::error::Result;
use crate::linalg::IntegerLattice;
use crate::numeric;
use crate::torus::unlikely::RationalLaurent;
use crate::torus::{
    constant_monomial_lattices, defect_condition_check, defect_report, torsion::torsion_points_bounded, unlikely_search,
    LaurentPoly, MonomialSubvariety, ScaledRoot,
};

#[derive(Subcommand, Debug)]
pub enum TorusCmd {
    /// Defect and geodesic defect of a monomial coset; with --sub, the defect condition for sub ⊆ variety.
    Defect {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        sub: Option<PathBuf>,
    },
    /// Torsion points on a curve f(x, y) = 0 in G_m^2, verified in cyclotomic arithmetic.
    Torsion {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 30)]
        max_order: u64,
        #[arg(long, default_value_t = 10_000)]
        order_limit: u64,
    },
    /// Points of a parametrized curve lying on codimension-2 algebraic subgroups.
    Unlikely {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        exp_bound: u32,
        #[arg(long)]
        t_height: u64,
    },
}

impl TorusCmd {
    pub fn name(&self) -> &'static str {
        match self {
            TorusCmd::Defect { .. } => "defect",
            TorusCmd::Torsion { .. } => "torsion",
            TorusCmd::Unlikely { .. } => "unlikely",
        }
    }
}

/// A coordinate of a coset constant: `"p/q"`, `{"modulus", "turns"}` for `r e^{2 pi i s}`,
/// or an algebraic number `{"min_poly", "approx"}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ConstJson {
    Rational(String),
    Scaled { modulus: String, turns: String },
    Algebraic(AlgebraicNumber),
}

#[derive(Deserialize)]
struct VarietyJson {
    constants: Vec<ConstJson>,
    directions: IntegerLattice,
}

fn variety(path: &Path) -> Result<MonomialSubvariety> {
    let j: VarietyJson = read_json(path)?;
    let constants = j
        .constants
        .into_iter()
        .map(|c| match c {
            ConstJson::Rational(s) => Ok(ScaledRoot::from_rational(&numeric::parse_rational(&s)?)?.to_algebraic()),
            ConstJson::Scaled { modulus, turns } => {
                Ok(ScaledRoot::new(numeric::parse_rational(&modulus)?, numeric::parse_rational(&turns)?)?.to_algebraic())
            }
            ConstJson::Algebraic(a) => Ok(a),
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialSubvariety::new(constants, j.directions)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CurveJson {
    Coords { coords: Vec<RationalLaurent> },
    Bare(Vec<RationalLaurent>),
}

pub fn run(cmd: &TorusCmd, config: &mut RunConfig) -> Result<Outcome> {
    match cmd {
        TorusCmd::Defect { variety: vpath, sub } => {
            let b = variety(vpath)?;
            let report = |v: &MonomialSubvariety| -> Result<serde_json::Value> {
                let (l, m) = constant_monomial_lattices(v)?;
                Ok(json!({ "dim": v.dim(), "report": defect_report(v)?, "L": l, "M": m }))
            };
            let mut out = json!({ "variety": report(&b)? });
            if let Some(p) = sub {
                let a = variety(p)?;
                out["sub"] = report(&a)?;
                out["defect_condition"] = json!(defect_condition_check(&a, &b)?);
            }
            Ok(Outcome::json(out))
        }
        TorusCmd::Torsion { curve, max_order, order_limit } => {
            let f: LaurentPoly = read_json(curve)?;
            let limit = config.bound("order_limit", *order_limit)?;
            let max_order = config.bound("max_order", *max_order)?;
            let s = torsion_points_bounded(&f, max_order, limit)?;
            let isolated = s.isolated().count();
            Ok(Outcome::json(json!({ "curve": f, "isolated_count": isolated, "search": s })))
        }
        TorusCmd::Unlikely { curve, exp_bound, t_height } => {
            let coords = match read_json::<CurveJson>(curve)? {
                CurveJson::Coords { coords } | CurveJson::Bare(coords) => coords,
            };
            config.bound("exp_bound", *exp_bound as u64)?;
            config.bound("t_height", *t_height)?;
            let r = unlikely_search(&coords, *exp_bound, *t_height)?;
            Ok(Outcome::json(json!({ "curve": coords, "search": r })))
        }
    }
}
