//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use posaffine::crooked::{mesh_emit, Domain};
use posaffine::freegroup::BaseArc;
use posaffine::numcore::{Dd, Tolerance};
use posaffine::posrep::{semigroup_trial, SemigroupTrial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::pipeline::{self, write_json, write_text};
use crate::{CliError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "posaffine", version, about = "Affine deformations of positive representations into SO(2n,2n-1)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every stage from a JSON config and write all artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the output directory of the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fuchsian representation of a Schottky group, with its boundary flags.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        schottky: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Strip deformation of a representation.
    Deform {
        #[arg(long)]
        rep: PathBuf,
        /// Comma-separated positive scale per generator.
        #[arg(long, value_delimiter = ',')]
        scales: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Margulis invariants over conjugacy classes up to a word length.
    Margulis {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// CSV of `word,length,t,alpha,alpha/t`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the crooked domain and check its side pairings.
    Domain {
        #[command(flatten)]
        input: Input,
        /// Also check pairwise disjointness of the halfspaces beyond the walls.
        #[arg(long)]
        check_disjoint: bool,
        /// Sampled points per halfspace pair and direction.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate uniform points of a ball in the tiling.
    Tile {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        max_depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Interior points whose translates are relocated.
        #[arg(long, default_value_t = 0)]
        relocate: usize,
        #[arg(long, default_value_t = 3)]
        relocate_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of the points that were not located.
        #[arg(long)]
        failures: Option<PathBuf>,
    },
    /// OBJ mesh of one wall of the domain (n = 1 only).
    Mesh {
        #[command(flatten)]
        input: Input,
        /// Wall index (0-based, in domain order) or label such as `a1+`.
        #[arg(long)]
        arc: String,
        #[arg(long)]
        bounds: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify random elements of the positive semigroup in exact arithmetic.
    Semigroup {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub eps_sign: Option<f64>,
    #[arg(long)]
    pub eps_eq: Option<f64>,
}

impl TolArgs {
    fn tolerance(&self) -> Result<Tolerance, CliError> {
        let base = Tolerance::for_scalar::<Dd>();
        Tolerance::new(self.eps_sign.unwrap_or(base.eps_sign), self.eps_eq.unwrap_or(base.eps_eq)).map_err(CliError::Config)
    }
}

#[derive(Debug, Args)]
pub struct Input {
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long)]
    pub def: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
}

/// Result of a command that completed: whether everything passed, and a
/// summary for stdout.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub summary: serde_json::Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            crate::EXIT_FAIL
        }
    }
}

fn load(input: &Input) -> Result<Loaded, CliError> {
    let tol = input.tol.tolerance()?;
    let (schottky, bmap) = pipeline::load_rep(&input.rep, &tol)?;
    let def = pipeline::load_def(&input.def, &bmap)?;
    Ok(Loaded {
        schottky,
        bmap,
        def,
        tol,
    })
}

struct Loaded {
    schottky: posaffine::freegroup::SchottkyData<Dd>,
    bmap: posaffine::posrep::BoundaryMap<Dd>,
    def: posaffine::cocycle::AffineDeformation<Dd>,
    tol: Tolerance,
}

fn build(l: &Loaded) -> Result<Domain<Dd>, CliError> {
    posaffine::crooked::build_domain(&l.def, &l.bmap, &l.tol).map_err(|e| CliError::at("domain", e))
}

fn emit(out: Option<&Path>, value: &impl serde::Serialize) -> Result<(), CliError> {
    match out {
        Some(p) => write_json(p, value),
        None => Ok(()),
    }
}

pub fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Run { config, output } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(o) = output {
                cfg.output = o;
            }
            let report = pipeline::run_pipeline(&cfg)?;
            Ok(Outcome {
                passed: report.passed(),
                summary: json!({
                    "verdict": report.verdict,
                    "output": cfg.output,
                    "stages": report.stages.iter().map(|s| json!({"stage": s.stage, "verdict": s.verdict})).collect::<Vec<_>>(),
                }),
            })
        }
        Command::Gen { n, schottky, out, tol } => {
            let tol = tol.tolerance()?;
            let s = pipeline::load_schottky(&schottky)?;
            let bmap = pipeline::generate(&s, n, &tol)?;
            write_json(&out, &bmap.to_rep_file(&s))?;
            Ok(Outcome {
                passed: true,
                summary: json!({"n": n, "rank": s.rank(), "out": out}),
            })
        }
        Command::Deform { rep, scales, out, tol } => {
            let tol = tol.tolerance()?;
            let (_, bmap) = pipeline::load_rep(&rep, &tol)?;
            let def = pipeline::strip(&bmap, scales.as_deref())?;
            write_json(&out, &def.to_file(Some(rep.display().to_string())))?;
            Ok(Outcome {
                passed: true,
                summary: json!({"kind": "strip", "out": out}),
            })
        }
        Command::Margulis {
            input,
            max_len,
            threshold,
            out,
        } => {
            let l = load(&input)?;
            let report = pipeline::margulis_scan(&l.schottky, &l.bmap, &l.def, max_len, threshold, &l.tol)?;
            if let Some(p) = &out {
                let csv = report.to_csv().map_err(|e| CliError::at("margulis", e))?;
                write_text(p, &csv)?;
            }
            Ok(Outcome {
                passed: report.passed(),
                summary: serde_json::to_value(&report).expect("report serializes"),
            })
        }
        Command::Domain {
            input,
            check_disjoint,
            samples,
            seed,
            out,
        } => {
            let l = load(&input)?;
            let (_, artifact) =
                pipeline::domain_checks(&l.def, &l.bmap, 200, check_disjoint.then_some(samples), seed, &l.tol)?;
            emit(out.as_deref(), &artifact)?;
            let summary = json!({
                "walls": artifact.domain.walls.len(),
                "side_pairing": artifact.side_pairing.iter().all(|c| c.passed()),
                "disjoint_sampled": artifact.disjointness.as_ref().map(|d| d.sampled_passed()),
                "disjoint_algebraic": artifact.disjointness.as_ref().map(|d| d.algebraic_passed()),
            });
            Ok(Outcome {
                passed: artifact.passed(),
                summary,
            })
        }
        Command::Tile {
            input,
            points,
            radius,
            max_depth,
            seed,
            relocate,
            relocate_len,
            out,
            failures,
        } => {
            if max_depth == 0 || !(radius >= 0.0 && radius.is_finite()) {
                return Err(CliError::Config("need max-depth >= 1 and a finite radius >= 0".into()));
            }
            let l = load(&input)?;
            let domain = build(&l)?;
            let tiles = pipeline::tiling(&domain, points, radius, max_depth, Some((relocate, relocate_len)), seed, &l.tol)?;
            emit(out.as_deref(), &tiles)?;
            if let Some(p) = &failures {
                let csv = tiles.experiment.failures_csv().map_err(|e| CliError::at("tiling", e))?;
                write_text(p, &csv)?;
            }
            Ok(Outcome {
                passed: tiles.passed(),
                summary: json!({
                    "points": points,
                    "located": tiles.experiment.located,
                    "success_fraction": tiles.experiment.success_fraction,
                    "depth_histogram": tiles.experiment.depth_histogram,
                    "relocation_mismatches": tiles.relocation.as_ref().map(|r| r.mismatches.len()),
                }),
            })
        }
        Command::Mesh {
            input,
            arc,
            bounds,
            out,
        } => {
            let l = load(&input)?;
            if l.bmap.representation().n() != 1 {
                return Err(CliError::Config(format!(
                    "meshes need n = 1 (dimension 3); this representation has n = {}",
                    l.bmap.representation().n()
                )));
            }
            let domain = build(&l)?;
            let wall = match arc.parse::<usize>() {
                Ok(i) => domain
                    .walls()
                    .get(i)
                    .ok_or_else(|| CliError::Config(format!("wall index {i} out of range")))?,
                Err(_) => domain
                    .walls()
                    .iter()
                    .find(|w| w.arc.to_string() == arc)
                    .ok_or_else(|| CliError::Config(format!("no wall labelled {arc}")))?,
            };
            let arc_label: BaseArc = wall.arc;
            let mesh = mesh_emit(&wall.halfspace, bounds).map_err(|e| match e {
                posaffine::crooked::CrookedError::Invalid(m) | posaffine::crooked::CrookedError::Unsupported(m) => {
                    CliError::Config(m)
                }
                e => CliError::at("mesh", e),
            })?;
            write_text(&out, &mesh.to_obj())?;
            Ok(Outcome {
                passed: true,
                summary: json!({"arc": arc_label.to_string(), "vertices": mesh.vertices.len(), "faces": mesh.faces.len(), "out": out}),
            })
        }
        Command::Semigroup { n, trials, seed } => {
            let trials = semigroup(n, trials, seed)?;
            let passed = trials.iter().filter(|t| t.passed()).count();
            let first_failure = trials.iter().position(|t| !t.passed());
            Ok(Outcome {
                passed: passed == trials.len(),
                summary: json!({
                    "n": n,
                    "trials": trials.len(),
                    "certified": passed,
                    "first_failure": first_failure.map(|i| json!({"trial": i, "detail": trials[i]})),
                }),
            })
        }
    }
}

/// `trials` independent draws; trial `k` uses stream `k` of the seed.
pub fn semigroup(n: usize, trials: usize, seed: u64) -> Result<Vec<SemigroupTrial>, CliError> {
    if n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    (0..trials)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            semigroup_trial(n, &mut rng).map_err(|e| CliError::at("semigroup", e))
        })
        .collect()
}
