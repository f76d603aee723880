//! Schottky data to representation, cocycle, Margulis scan, domain and tiling.

use std::path::{Path, PathBuf};
use std::time::Instant;

use posaffine::cocycle::AffineDeformation;
use posaffine::crooked::{
    build_domain, interior_points, relocation_check, tiling_experiment, DisjointnessReport, Domain, DomainFile,
    PairingCheck, RelocationReport, TilingReport,
};
use posaffine::freegroup::{SchottkyData, SchottkyFile};
use posaffine::margulis::{properness_scan, MargulisContext, MargulisReport, Verdict};
use posaffine::numcore::{Dd, Scalar, Tolerance};
use posaffine::posrep::{BoundaryMap, RepFile, Representation};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{CliError, RunConfig};

pub const REP_FILE: &str = "rep.json";
pub const DEF_FILE: &str = "def.json";
pub const ALPHA_FILE: &str = "alpha.csv";
pub const DOMAIN_FILE: &str = "domain.json";
pub const TILES_FILE: &str = "tiles.json";
pub const TILE_FAILURES_FILE: &str = "tile_failures.csv";
pub const REPORT_FILE: &str = "report.json";

fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    write_text(path, &text)
}

/// Schottky data that passes its ping-pong check.
pub fn load_schottky(path: &Path) -> Result<SchottkyData<Dd>, CliError> {
    let file: SchottkyFile = read_json(path)?;
    let s = SchottkyData::<Dd>::from_file(&file).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let report = s.verify_ping_pong(&Tolerance::default());
    if !report.passed() {
        return Err(CliError::Config(format!(
            "{}: ping-pong fails: {}",
            path.display(),
            report.violations.join("; ")
        )));
    }
    Ok(s)
}

/// Fuchsian representation with its boundary map; the flags must play
/// ping-pong.
pub fn generate(s: &SchottkyData<Dd>, n: usize, tol: &Tolerance) -> Result<BoundaryMap<Dd>, CliError> {
    if n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    let rep = Representation::fuchsian(s, n, tol).map_err(|e| CliError::at("representation", e))?;
    let bmap = BoundaryMap::fuchsian(rep, s.arc_system(), tol).map_err(|e| CliError::at("representation", e))?;
    let report = bmap.verify_flag_ping_pong(tol).map_err(|e| CliError::at("representation", e))?;
    if !report.passed() {
        return Err(CliError::Stage {
            stage: "representation".into(),
            message: format!("flag ping-pong fails: {}", report.violations.join("; ")),
        });
    }
    Ok(bmap)
}

pub fn load_rep(path: &Path, tol: &Tolerance) -> Result<(SchottkyData<Dd>, BoundaryMap<Dd>), CliError> {
    let file: RepFile = read_json(path)?;
    BoundaryMap::from_rep_file(&file, tol).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_def(path: &Path, bmap: &BoundaryMap<Dd>) -> Result<AffineDeformation<Dd>, CliError> {
    let file = read_json(path)?;
    AffineDeformation::from_file(&file, bmap).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Strip deformation with one scale per generator.
pub fn strip(bmap: &BoundaryMap<Dd>, scales: Option<&[f64]>) -> Result<AffineDeformation<Dd>, CliError> {
    let rank = bmap.representation().rank();
    let scales: Vec<Dd> = match scales {
        None => vec![Dd::from(1.0); rank],
        Some(s) if s.len() == rank => s.iter().map(|&x| Dd::from(x)).collect(),
        Some(s) => return Err(CliError::Config(format!("{} scales for rank {rank}", s.len()))),
    };
    if let Some(i) = scales.iter().position(|s| !(s.to_f64() > 0.0)) {
        return Err(CliError::Config(format!("scale {i} is not positive")));
    }
    AffineDeformation::strip_from_boundary(bmap, &scales).map_err(|e| CliError::at("cocycle", e))
}

pub fn margulis_scan(
    s: &SchottkyData<Dd>,
    bmap: &BoundaryMap<Dd>,
    def: &AffineDeformation<Dd>,
    max_len: usize,
    threshold: f64,
    tol: &Tolerance,
) -> Result<MargulisReport, CliError> {
    let mut ctx = MargulisContext::new(bmap, Some(s));
    ctx.tol = *tol;
    properness_scan(&ctx, def, max_len, threshold).map_err(|e| CliError::at("margulis", e))
}

/// Domain file with its checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainArtifact {
    pub domain: DomainFile,
    pub side_pairing: Vec<PairingCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disjointness: Option<DisjointnessReport>,
}

impl DomainArtifact {
    pub fn passed(&self) -> bool {
        self.side_pairing.iter().all(PairingCheck::passed)
            && self
                .disjointness
                .as_ref()
                .is_none_or(|d| d.sampled_passed() && d.algebraic_passed())
    }
}

pub fn domain_checks(
    def: &AffineDeformation<Dd>,
    bmap: &BoundaryMap<Dd>,
    pairing_samples: usize,
    disjoint_samples: Option<usize>,
    seed: u64,
    tol: &Tolerance,
) -> Result<(Domain<Dd>, DomainArtifact), CliError> {
    let domain = build_domain(def, bmap, tol).map_err(|e| CliError::at("domain", e))?;
    let side_pairing = domain
        .side_pairing_check(pairing_samples, seed, tol)
        .map_err(|e| CliError::at("domain", e))?;
    let disjointness = disjoint_samples
        .map(|k| domain.disjointness(k, seed, tol))
        .transpose()
        .map_err(|e| CliError::at("domain", e))?;
    let artifact = DomainArtifact {
        domain: domain.to_file(),
        side_pairing,
        disjointness,
    };
    Ok((domain, artifact))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TilesArtifact {
    pub experiment: TilingReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relocation: Option<RelocationReport>,
}

impl TilesArtifact {
    pub fn passed(&self) -> bool {
        self.experiment.passed() && self.relocation.as_ref().is_none_or(RelocationReport::passed)
    }
}

/// Ball experiment plus, when `relocation` is `(points, max_len)`, the
/// relocation of translates of interior points.
pub fn tiling(
    domain: &Domain<Dd>,
    points: usize,
    radius: f64,
    max_depth: usize,
    relocation: Option<(usize, usize)>,
    seed: u64,
    tol: &Tolerance,
) -> Result<TilesArtifact, CliError> {
    let experiment = tiling_experiment(domain, points, radius, max_depth, seed, tol);
    let relocation = match relocation {
        Some((count, max_len)) if count > 0 => {
            let qs = interior_points(domain, count, 1.0, seed, tol);
            if qs.len() < count {
                return Err(CliError::Stage {
                    stage: "tiling".into(),
                    message: format!("found only {} of {count} interior points in the unit ball", qs.len()),
                });
            }
            Some(relocation_check(domain, &qs, max_len, tol))
        }
        _ => None,
    };
    Ok(TilesArtifact { experiment, relocation })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<String>,
    pub summary: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halt {
    pub stage: String,
    pub error: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub verdict: Verdict,
    pub stages: Vec<StageReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halted: Option<Halt>,
    /// Wall-clock seconds per stage; the only field that varies between runs.
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn stage(&self, name: &str) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.stage == name)
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

struct Run<'a> {
    out: &'a Path,
    report: RunReport,
    clock: Instant,
}

impl Run<'_> {
    fn finish_stage(&mut self, stage: &str, ok: bool, artifact: Option<&str>, summary: serde_json::Value) {
        self.report.stages.push(StageReport {
            stage: stage.into(),
            verdict: verdict(ok),
            artifact: artifact.map(String::from),
            summary,
        });
        self.report.timings.push((stage.into(), self.clock.elapsed().as_secs_f64()));
        self.clock = Instant::now();
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

/// Runs every stage, writing the artifacts into `cfg.output`. A stage error
/// stops the run; `report.json` then names the stage and the error.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output).map_err(|e| CliError::io(&cfg.output, e))?;
    let mut run = Run {
        out: &cfg.output,
        report: RunReport {
            verdict: Verdict::Pass,
            stages: Vec::new(),
            halted: None,
            timings: Vec::new(),
        },
        clock: Instant::now(),
    };
    match stages(cfg, &mut run) {
        Ok(()) => {
            run.report.verdict = verdict(run.report.stages.iter().all(|s| s.verdict == Verdict::Pass));
            write_json(&run.path(REPORT_FILE), &run.report)?;
            Ok(run.report)
        }
        Err(e) => {
            run.report.verdict = Verdict::Fail;
            run.report.halted = Some(Halt {
                stage: e.stage().unwrap_or("config").to_string(),
                error: e.to_string(),
                exit_code: e.exit_code(),
            });
            write_json(&run.path(REPORT_FILE), &run.report)?;
            Err(e)
        }
    }
}

fn stages(cfg: &RunConfig, run: &mut Run<'_>) -> Result<(), CliError> {
    let tol = cfg.tolerance()?;
    let s = load_schottky(&cfg.schottky)?;
    let bmap = generate(&s, cfg.n, &tol)?;
    write_json(&run.path(REP_FILE), &bmap.to_rep_file(&s))?;
    run.finish_stage(
        "representation",
        true,
        Some(REP_FILE),
        json!({"n": cfg.n, "rank": s.rank(), "dim": 4 * cfg.n - 1}),
    );

    let scales = cfg
        .scales
        .as_ref()
        .map(|v| v.iter().map(|e| e.to_scalar::<f64>()).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(CliError::Config)?;
    let def = strip(&bmap, scales.as_deref())?;
    write_json(&run.path(DEF_FILE), &def.to_file(Some(REP_FILE.into())))?;
    run.finish_stage("cocycle", true, Some(DEF_FILE), json!({"kind": "strip"}));

    let scan = margulis_scan(&s, &bmap, &def, cfg.max_len, cfg.threshold, &tol)?;
    let csv = scan.to_csv().map_err(|e| CliError::at("margulis", e))?;
    write_text(&run.path(ALPHA_FILE), &csv)?;
    let summary = serde_json::to_value(&scan).expect("report serializes");
    run.finish_stage("margulis", scan.passed(), Some(ALPHA_FILE), summary);

    let (domain, artifact) = domain_checks(&def, &bmap, cfg.pairing_samples, Some(cfg.disjoint_samples), cfg.seed, &tol)?;
    write_json(&run.path(DOMAIN_FILE), &artifact)?;
    let disjoint = artifact.disjointness.as_ref().expect("requested");
    let summary = json!({
        "walls": artifact.domain.walls.len(),
        "pairs": disjoint.pairs.len(),
        "samples_per_pair": cfg.disjoint_samples,
        "sampled": verdict(disjoint.sampled_passed()),
        "algebraic": verdict(disjoint.algebraic_passed()),
        "side_pairing": verdict(artifact.side_pairing.iter().all(PairingCheck::passed)),
        "max_pairing_residual": artifact.side_pairing.iter().map(|c| c.residual).fold(0.0, f64::max),
    });
    run.finish_stage("domain", artifact.passed(), Some(DOMAIN_FILE), summary);

    let tiles = tiling(
        &domain,
        cfg.tile_points,
        cfg.radius,
        cfg.max_depth,
        Some((cfg.relocation_points, cfg.relocation_len)),
        cfg.seed,
        &tol,
    )?;
    write_json(&run.path(TILES_FILE), &tiles)?;
    if !tiles.experiment.failures.is_empty() {
        let csv = tiles.experiment.failures_csv().map_err(|e| CliError::at("tiling", e))?;
        write_text(&run.path(TILE_FAILURES_FILE), &csv)?;
    }
    let summary = json!({
        "points": tiles.experiment.samples,
        "success_fraction": tiles.experiment.success_fraction,
        "depth_histogram": tiles.experiment.depth_histogram,
        "relocation_mismatches": tiles.relocation.as_ref().map_or(0, |r| r.mismatches.len()),
    });
    run.finish_stage("tiling", tiles.passed(), Some(TILES_FILE), summary);
    Ok(())
}
