use std::path::{Path, PathBuf};

use clap::Subcommand;
use rug::Rational;
use serde_json::{json, Value};

use super::{read_json, Outcome, RunConfig};
use crate::abelian::{
    annihilates_exactly, canonical_height, degree, degree_comparability, minimal_torsion_order, nearby_period,
    hom::small_annihilating_hom_bounded, parse_point, small_period_basis, torsion_coset_complexity, CurveJson,
    PolarizedTorus, Subtorus, TorusJson,
};
use crate::error::{invalid, Result};
use crate::linalg::lattice::{int_from_json, matrix_to_json};
use crate::linalg::{IntMatrix, IntegerLattice};
use crate::numeric::{self, Complex};

#[derive(Subcommand, Debug)]
pub enum AbelianCmd {
    /// Degree d! vol(Omega_Y) of a subtorus, with optional comparability against a second form.
    Degree {
        #[arg(long)]
        torus: PathBuf,
        /// Period lattice of the subtorus (default: the whole torus).
        #[arg(long)]
        sublattice: Option<PathBuf>,
        /// Second hermitian form, as a row-major list of [re, im] entries.
        #[arg(long)]
        h2: Option<PathBuf>,
        /// Rational period coordinates of a point; reports the torsion coset complexity of x + Y.
        #[arg(long, allow_hyphen_values = true)]
        torsion: Option<String>,
    },
    /// Periods of a subtorus attaining the successive minima.
    Minima {
        #[arg(long)]
        torus: PathBuf,
        #[arg(long)]
        sublattice: Option<PathBuf>,
    },
    /// A period omega with z - omega tangent to the subtorus, and the norm bound.
    Nearby {
        #[arg(long)]
        torus: PathBuf,
        #[arg(long)]
        sublattice: Option<PathBuf>,
        /// One complex coordinate per flag, e.g. `--z 0.5+0.1i --z -0.2i`.
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Shortest homomorphism in a lattice of homomorphisms sending p_log to a period.
    Annihilate {
        #[arg(long)]
        source: PathBuf,
        /// Target torus (default: the source).
        #[arg(long)]
        target: Option<PathBuf>,
        /// JSON list of integer matrices acting on period coordinates.
        #[arg(long)]
        generators: PathBuf,
        /// Complex coordinates of p_log, one per flag.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "torsion")]
        plog: Vec<String>,
        /// Rational period coordinates of a torsion point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        torsion: Option<String>,
        #[arg(long, default_value_t = crate::abelian::hom::DEFAULT_MAX_NORM)]
        max_norm: f64,
    },
    /// Canonical height of a rational point on y^2 = x^3 + a x + b.
    Height {
        #[arg(long)]
        curve: PathBuf,
        /// `x,y` with rational coordinates, or `O`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

impl AbelianCmd {
    pub fn name(&self) -> &'static str {
        match self {
            AbelianCmd::Degree { .. } => "degree",
            AbelianCmd::Minima { .. } => "minima",
            AbelianCmd::Nearby { .. } => "nearby",
            AbelianCmd::Annihilate { .. } => "annihilate",
            AbelianCmd::Height { .. } => "height",
        }
    }
}

fn torus(path: &Path, prec: u32) -> Result<PolarizedTorus> {
    read_json::<TorusJson>(path)?.into_torus(prec)
}

fn subtorus(t: &PolarizedTorus, path: &Option<PathBuf>) -> Result<Subtorus> {
    match path {
        Some(p) => Subtorus::new(t, read_json::<IntegerLattice>(p)?),
        None => Ok(t.full()),
    }
}

fn rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|x| numeric::parse_rational(x.trim())).collect()
}

fn complexes(prec: u32, v: &[String]) -> Result<Vec<Complex>> {
    v.iter().map(|s| Complex::parse(prec, s)).collect()
}

fn hermitian(path: &Path, g: usize, prec: u32) -> Result<Vec<Vec<Complex>>> {
    let flat: Vec<[String; 2]> = read_json::<Vec<[Value; 2]>>(path)?
        .into_iter()
        .map(|[a, b]| [a.to_string().trim_matches('"').to_string(), b.to_string().trim_matches('"').to_string()])
        .collect();
    if flat.len() != g * g {
        return invalid(format!("expected {} hermitian entries", g * g));
    }
    let entries = flat
        .iter()
        .map(|[a, b]| Ok(Complex::new(numeric::parse_real(prec, a)?, numeric::parse_real(prec, b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(entries.chunks(g).map(|r| r.to_vec()).collect())
}

fn point_from_coords(t: &PolarizedTorus, coords: &[Rational]) -> Result<Vec<Complex>> {
    if coords.len() != 2 * t.dim() {
        return invalid(format!("expected {} period coordinates", 2 * t.dim()));
    }
    let p = t.prec();
    let mut z = vec![Complex::zero(p); t.dim()];
    for (q, w) in coords.iter().zip(t.periods()) {
        let s = numeric::from_rational(p, q);
        for (zi, wi) in z.iter_mut().zip(w) {
            *zi = &*zi + &wi.scale(&s);
        }
    }
    Ok(z)
}

pub fn run(cmd: &AbelianCmd, config: &mut RunConfig) -> Result<Outcome> {
    let prec = config.precision_bits;
    match cmd {
        AbelianCmd::Degree { torus: tp, sublattice, h2, torsion } => {
            let t = torus(tp, prec)?;
            let y = subtorus(&t, sublattice)?;
            let mut out = json!({
                "dim": y.dim(),
                "degree": config.real(&degree(&y)?),
                "volume": config.real(&y.volume()?),
                "sublattice": y.lattice(),
            });
            if let Some(h) = h2 {
                out["comparability"] = serde_json::to_value(degree_comparability(&y, &hermitian(h, t.dim(), prec)?)?)?;
            }
            if let Some(s) = torsion {
                let order = minimal_torsion_order(&rationals(s)?, &y)?;
                out["torsion_coset_complexity"] = serde_json::to_value(torsion_coset_complexity(&order, &y)?)?;
            }
            Ok(Outcome::json(out))
        }
        AbelianCmd::Minima { torus: tp, sublattice } => {
            let t = torus(tp, prec)?;
            let b = small_period_basis(&subtorus(&t, sublattice)?)?;
            Ok(Outcome::json(json!({
                "minima": b.minima.to_json(),
                "periods": b.periods.iter().map(|w| w.iter().map(|z| config.complex(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "degree": config.real(&b.degree),
                "product": config.real(&b.product),
                "achieved_constant": config.real(&b.achieved_constant),
                "achieved_constant_max": config.real(&b.achieved_constant_max),
                "minkowski_envelope": config.real(&b.minkowski_envelope),
                "satisfies_minkowski": b.satisfies_minkowski(),
                "satisfies_hadamard": b.satisfies_hadamard(),
            })))
        }
        AbelianCmd::Nearby { torus: tp, sublattice, z } => {
            let t = torus(tp, prec)?;
            let y = subtorus(&t, sublattice)?;
            let n = nearby_period(&complexes(prec, z)?, &y)?;
            let cv = |v: &[Complex]| v.iter().map(|z| config.complex(z)).collect::<Vec<_>>();
            Ok(Outcome::json(json!({
                "coefficients": n.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "omega": cv(&n.omega),
                "remainder": cv(&n.remainder),
                "omega_norm": config.real(&n.omega_norm),
                "z_norm": config.real(&n.z_norm),
                "bound": config.real(&n.bound),
                "achieved_constant": config.real(&n.achieved_constant),
                "tangent_residual": n.tangent_residual,
            })))
        }
        AbelianCmd::Annihilate { source, target, generators, plog, torsion, max_norm } => {
            let x = torus(source, prec)?;
            let y = match target {
                Some(p) => torus(p, prec)?,
                None => x.clone(),
            };
            let gens: Vec<IntMatrix> = read_json::<Vec<Vec<Vec<Value>>>>(generators)?
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(int_from_json).collect::<Result<Vec<_>>>()).collect())
                .collect::<Result<_>>()?;
            let coords = torsion.as_deref().map(rationals).transpose()?;
            let p_log = match &coords {
                Some(c) => point_from_coords(&x, c)?,
                None if !plog.is_empty() => complexes(prec, plog)?,
                None => return Err(crate::Error::Usage("give --plog or --torsion".into())),
            };
            config.tolerance("max_norm", *max_norm)?;
            let h = small_annihilating_hom_bounded(&x, &gens, &p_log, &y, *max_norm)?;
            let mut out = json!({
                "matrix": matrix_to_json(&h.matrix),
                "coefficients": h.coefficients.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                "norm": config.real(&h.norm),
                "residual": h.residual,
                "tangent_rank": h.tangent_rank,
                "surjective": h.surjective,
                "search_radius2": h.search_radius2,
                "candidates_examined": h.candidates_examined,
            });
            if let Some(c) = coords {
                out["exact"] = json!(annihilates_exactly(&h.matrix, &c));
            }
            Ok(Outcome::json(out))
        }
        AbelianCmd::Height { curve, point } => {
            let e = read_json::<CurveJson>(curve)?.into_curve()?;
            let p = parse_point(point)?;
            let h = canonical_height(&e, &p, prec)?;
            Ok(Outcome::json(json!({
                "curve": CurveJson::from_curve(&e),
                "point": p.to_string(),
                "canonical_height": config.real(&h.value),
                "naive_height": p.x().map(|x| config.real(&crate::abelian::naive_height(prec, x))),
                "torsion_order": h.torsion_order,
                "terms": h.terms,
                "tail_estimate": numeric::fmt_real(&h.tail_estimate, 6),
                "working_precision_bits": h.working_precision_bits,
            })))
        }
    }
}
