//! Standardized per-system dataset bundles: 16 trajectory variants (all
//! combinations of granularity × role × view × noise), two regression
//! datasets, and a metadata document, with a checksummed manifest.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use crate::error::{ChaosError, Result};
use crate::inference;
use crate::integrate;
use crate::registry::{self, SystemSpec};
use crate::trajectory::{Provenance, Trajectory};

/// Coarse sampling rate, points per period.
pub const COARSE_GRANULARITY: usize = 15;
/// Fine sampling rate, points per period.
pub const FINE_GRANULARITY: usize = 100;
/// Total length of each trajectory file, periods.
pub const TOTAL_PERIODS: usize = 12;
/// Default loader split: leading train periods.
pub const TRAIN_PERIODS: usize = 10;
/// Default loader split: trailing validation periods.
pub const VALIDATION_PERIODS: usize = 2;
/// Observational noise level, as a fraction of each coordinate's standard
/// deviation.
pub const NOISE_AMPLITUDE: f64 = 1.0 / 40.0;

/// Fine integration rate (points per period) before decimation.
const BASE: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    Coarse,
    Fine,
}

impl Granularity {
    pub fn points_per_period(self) -> usize {
        match self {
            Granularity::Coarse => COARSE_GRANULARITY,
            Granularity::Fine => FINE_GRANULARITY,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Granularity::Coarse => "coarse",
            Granularity::Fine => "fine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Train,
    Test,
}

impl Role {
    fn label(self) -> &'static str {
        match self {
            Role::Train => "train",
            Role::Test => "test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum View {
    Multivariate,
    Univariate,
}

impl View {
    fn label(self) -> &'static str {
        match self {
            View::Multivariate => "multivariate",
            View::Univariate => "univariate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Noise {
    Clean,
    Noisy,
}

impl Noise {
    fn label(self) -> &'static str {
        match self {
            Noise::Clean => "clean",
            Noise::Noisy => "noisy",
        }
    }
}

/// File name of one trajectory variant inside a bundle directory.
pub fn variant_file(granularity: Granularity, role: Role, view: View, noise: Noise) -> String {
    format!(
        "{}_{}_{}_{}.csv",
        granularity.label(),
        role.label(),
        view.label(),
        noise.label()
    )
}

/// All 16 (granularity, role, view, noise) combinations.
pub fn all_variants() -> Vec<(Granularity, Role, View, Noise)> {
    let mut out = Vec::with_capacity(16);
    for g in [Granularity::Coarse, Granularity::Fine] {
        for r in [Role::Train, Role::Test] {
            for v in [View::Multivariate, View::Univariate] {
                for n in [Noise::Clean, Noise::Noisy] {
                    out.push((g, r, v, n));
                }
            }
        }
    }
    out
}

/// Manifest record for one file in a bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    /// FNV-1a 64-bit checksum of the file bytes, hex-encoded.
    pub checksum: String,
    /// Noise seed (None for deterministic files).
    pub seed: Option<u64>,
    pub noise_amplitude: f64,
    /// Settled initial condition of the deterministic component.
    pub initial_condition: Vec<f64>,
}

/// Manifest record for one system's bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct BundleEntry {
    pub files: BTreeMap<String, FileEntry>,
}

/// Top-level manifest covering every built bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub registry_version: String,
    pub master_seed: u64,
    pub systems: BTreeMap<String, BundleEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const METADATA_FILE: &str = "metadata.json";
pub const TRAIN_REGRESSION_FILE: &str = "train_regression.json";
pub const TEST_REGRESSION_FILE: &str = "test_regression.json";

/// FNV-1a 64-bit hash of a byte string.
pub fn checksum64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn hash_name(name: &str) -> u64 {
    checksum64(name.as_bytes())
}

/// Metadata document for one system: the registry record plus its
/// mathematical annotations, with a stable field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemMetadata {
    pub name: String,
    pub dimension: usize,
    pub parameters: BTreeMap<String, f64>,
    pub dt: f64,
    pub period: f64,
    pub initial_condition: Vec<f64>,
    pub hamiltonian: bool,
    pub nonautonomous: bool,
    pub bounded: bool,
    pub chaotic: bool,
    pub transcendental: bool,
    pub lyapunov_spectrum: Vec<f64>,
    pub largest_lyapunov: f64,
    pub kaplan_yorke_dimension: f64,
    pub correlation_dimension: f64,
    pub multiscale_entropy: f64,
    pub pesin_entropy: f64,
    pub citation: String,
    pub description: String,
}

/// Build the metadata document for a system. Errors if the registry record
/// carries no annotations.
pub fn export_metadata(spec: &SystemSpec) -> Result<SystemMetadata> {
    let ann = spec.annotations.as_ref().ok_or_else(|| ChaosError::MissingAnnotation {
        fields: vec![
            "lyapunov_spectrum".into(),
            "correlation_dimension".into(),
            "multiscale_entropy".into(),
        ],
    })?;
    Ok(SystemMetadata {
        name: spec.name.to_string(),
        dimension: spec.dimension,
        parameters: spec.parameters(),
        dt: spec.dt,
        period: spec.period,
        initial_condition: spec.default_initial_condition.clone(),
        hamiltonian: spec.flags.hamiltonian,
        nonautonomous: spec.flags.nonautonomous,
        bounded: spec.flags.bounded,
        chaotic: spec.flags.chaotic,
        transcendental: spec.flags.transcendental,
        lyapunov_spectrum: ann.lyapunov_spectrum.clone(),
        largest_lyapunov: ann.largest_lyapunov,
        kaplan_yorke_dimension: ann.kaplan_yorke_dimension,
        correlation_dimension: ann.correlation_dimension,
        multiscale_entropy: ann.multiscale_entropy,
        pesin_entropy: ann.pesin_entropy,
        citation: spec.citation.to_string(),
        description: spec.description.to_string(),
    })
}

fn add_observational_noise(traj: &Trajectory, amplitude: f64, seed: u64) -> Trajectory {
    let stds = traj.std();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut noisy = traj.clone();
    for i in 0..noisy.len() {
        for j in 0..noisy.dim {
            let eps: f64 = normal.sample(&mut rng);
            noisy.states[i * noisy.dim + j] += amplitude * stds[j] * eps;
        }
    }
    noisy.provenance.seed = Some(seed);
    noisy.provenance.noise_amplitude = amplitude;
    noisy
}

fn write_variant(
    dir: &Path,
    traj: &Trajectory,
    granularity: Granularity,
    role: Role,
    view: View,
    noise: Noise,
) -> Result<(String, FileEntry)> {
    let shown = match view {
        View::Multivariate => traj.clone(),
        View::Univariate => traj.univariate(0),
    };
    let name = variant_file(granularity, role, view, noise);
    let mut buf = Vec::new();
    shown.write_csv(&mut buf)?;
    fs::write(dir.join(&name), &buf)?;
    Ok((
        name,
        FileEntry {
            checksum: format!("{:016x}", checksum64(&buf)),
            seed: traj.provenance.seed,
            noise_amplitude: traj.provenance.noise_amplitude,
            initial_condition: traj.provenance.initial_condition.clone(),
        },
    ))
}

/// Settled initial conditions for the train and test trajectories. The
/// test point comes from perturbing the settled train point by up to 5% of
/// its amplitude and settling again (deterministic in the master seed).
fn split_initial_conditions(spec: &SystemSpec, master_seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let train_ic = integrate::settle_on_attractor(
        spec,
        &spec.default_initial_condition,
        integrate::DEFAULT_TRANSIENT_PERIODS,
    )?;
    let scale = train_ic.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
    let mut rng =
        ChaCha8Rng::seed_from_u64(master_seed ^ hash_name(spec.name) ^ 0xD474);
    let jitter = rand_distr::Uniform::new(-0.05 * scale, 0.05 * scale);
    let perturbed: Vec<f64> = train_ic.iter().map(|v| v + jitter.sample(&mut rng)).collect();
    let test_ic = integrate::settle_on_attractor(spec, &perturbed, 7)?;
    Ok((train_ic, test_ic))
}

fn build_bundle_into(spec: &SystemSpec, dir: &Path, master_seed: u64) -> Result<BundleEntry> {
    let mut entry = BundleEntry::default();
    let (train_ic, test_ic) = split_initial_conditions(spec, master_seed)?;
    let dt = spec.period / BASE as f64;
    for (role, ic) in [(Role::Train, &train_ic), (Role::Test, &test_ic)] {
        let fine_base = integrate::integrate_fixed(spec, ic, dt, TOTAL_PERIODS * BASE)?;
        for granularity in [Granularity::Coarse, Granularity::Fine] {
            let pts = granularity.points_per_period();
            let full = integrate::resample(&fine_base, pts as f64, spec.period)?;
            // Drop the trailing endpoint: exactly TOTAL_PERIODS * pts rows.
            let mut clean = full.slice(0, TOTAL_PERIODS * pts);
            clean.provenance = Provenance::deterministic(spec.name, ic);
            let noise_seed = master_seed
                ^ hash_name(spec.name)
                    .wrapping_add(granularity.points_per_period() as u64)
                    .wrapping_add(match role {
                        Role::Train => 1,
                        Role::Test => 2,
                    });
            let noisy = add_observational_noise(&clean, NOISE_AMPLITUDE, noise_seed);
            for view in [View::Multivariate, View::Univariate] {
                let (name, fe) = write_variant(dir, &clean, granularity, role, view, Noise::Clean)?;
                entry.files.insert(name, fe);
                let (name, fe) = write_variant(dir, &noisy, granularity, role, view, Noise::Noisy)?;
                entry.files.insert(name, fe);
            }
        }
    }
    let bundle = inference::make_regression_dataset(
        spec,
        inference::REGRESSION_GRANULARITY,
        inference::REGRESSION_PERIODS,
    )?;
    for (file, ds) in [
        (TRAIN_REGRESSION_FILE, &bundle.train),
        (TEST_REGRESSION_FILE, &bundle.test),
    ] {
        let buf = serde_json::to_vec_pretty(ds)?;
        fs::write(dir.join(file), &buf)?;
        entry.files.insert(
            file.to_string(),
            FileEntry {
                checksum: format!("{:016x}", checksum64(&buf)),
                seed: None,
                noise_amplitude: 0.0,
                initial_condition: ds.initial_condition.clone(),
            },
        );
    }
    let metadata = export_metadata(spec)?;
    let buf = serde_json::to_vec_pretty(&metadata)?;
    fs::write(dir.join(METADATA_FILE), &buf)?;
    entry.files.insert(
        METADATA_FILE.to_string(),
        FileEntry {
            checksum: format!("{:016x}", checksum64(&buf)),
            seed: None,
            noise_amplitude: 0.0,
            initial_condition: spec.default_initial_condition.clone(),
        },
    );
    Ok(entry)
}

/// Build one system's bundle under `out_dir/<system>`. The build is
/// atomic: files are written to a temporary sibling directory that is
/// renamed into place only on success.
pub fn build_bundle(spec: &SystemSpec, out_dir: &Path, master_seed: u64) -> Result<BundleEntry> {
    fs::create_dir_all(out_dir)?;
    let final_dir = out_dir.join(spec.name);
    let tmp_dir = out_dir.join(format!(".{}.partial", spec.name));
    if tmp_dir.exists() {
        fs::remove_dir_all(&tmp_dir)?;
    }
    fs::create_dir_all(&tmp_dir)?;
    match build_bundle_into(spec, &tmp_dir, master_seed) {
        Ok(entry) => {
            if final_dir.exists() {
                fs::remove_dir_all(&final_dir)?;
            }
            fs::rename(&tmp_dir, &final_dir)?;
            Ok(entry)
        }
        Err(e) => {
            let _ = fs::remove_dir_all(&tmp_dir);
            Err(e)
        }
    }
}

/// Per-system outcome of a full dataset build.
#[derive(Debug, Serialize)]
pub struct BuildStatus {
    pub system: String,
    pub ok: bool,
    pub error: Option<String>,
}

/// Build bundles for every registry system in parallel and write the
/// top-level manifest. Individual failures are reported per system and do
/// not abort the rest of the build.
pub fn build_all_bundles(out_dir: &Path, master_seed: u64) -> Result<(Manifest, Vec<BuildStatus>)> {
    fs::create_dir_all(out_dir)?;
    let specs: Vec<&SystemSpec> = registry::all_systems().collect();
    let results: Vec<(String, Result<BundleEntry>)> = specs
        .par_iter()
        .map(|spec| (spec.name.to_string(), build_bundle(spec, out_dir, master_seed)))
        .collect();
    let mut manifest = Manifest {
        registry_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed,
        systems: BTreeMap::new(),
    };
    let mut statuses = Vec::new();
    for (name, result) in results {
        match result {
            Ok(entry) => {
                manifest.systems.insert(name.clone(), entry);
                statuses.push(BuildStatus {
                    system: name,
                    ok: true,
                    error: None,
                });
            }
            Err(e) => statuses.push(BuildStatus {
                system: name,
                ok: false,
                error: Some(e.to_string()),
            }),
        }
    }
    statuses.sort_by(|a, b| a.system.cmp(&b.system));
    let buf = serde_json::to_vec_pretty(&manifest)?;
    fs::write(out_dir.join(MANIFEST_FILE), buf)?;
    Ok((manifest, statuses))
}

pub fn read_manifest(data_dir: &Path) -> Result<Manifest> {
    let path = data_dir.join(MANIFEST_FILE);
    if !path.exists() {
        return Err(ChaosError::MissingFile {
            path: path.display().to_string(),
        });
    }
    let file = fs::File::open(&path)?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

fn verified_bytes(data_dir: &Path, system: &str, file: &str) -> Result<(PathBuf, Vec<f64>, Vec<u8>)> {
    let manifest = read_manifest(data_dir)?;
    let path = data_dir.join(system).join(file);
    let entry = manifest
        .systems
        .get(system)
        .and_then(|b| b.files.get(file))
        .ok_or_else(|| ChaosError::MissingFile {
            path: path.display().to_string(),
        })?;
    if !path.exists() {
        return Err(ChaosError::MissingFile {
            path: path.display().to_string(),
        });
    }
    let bytes = fs::read(&path)?;
    let got = format!("{:016x}", checksum64(&bytes));
    if got != entry.checksum {
        return Err(ChaosError::ChecksumMismatch {
            path: path.display().to_string(),
            expected: entry.checksum.clone(),
            got,
        });
    }
    Ok((path, entry.initial_condition.clone(), bytes))
}

/// Load one trajectory variant and split it into the default 10-period
/// train / 2-period validation portions, verifying the manifest checksum.
pub fn load_split(
    data_dir: &Path,
    system: &str,
    granularity: Granularity,
    role: Role,
    view: View,
    noise: Noise,
) -> Result<(Trajectory, Trajectory)> {
    let file = variant_file(granularity, role, view, noise);
    let (_, ic, bytes) = verified_bytes(data_dir, system, &file)?;
    let provenance = Provenance::deterministic(system, &ic);
    let pts = granularity.points_per_period();
    let traj = Trajectory::read_csv(&bytes[..], provenance, pts as f64)?;
    let cut = TRAIN_PERIODS * pts;
    if traj.len() < cut + VALIDATION_PERIODS * pts {
        return Err(ChaosError::SeriesTooShort {
            needed: (TRAIN_PERIODS + VALIDATION_PERIODS) * pts,
            got: traj.len(),
        });
    }
    let train = traj.slice(0, cut);
    let validation = traj.slice(cut, cut + VALIDATION_PERIODS * pts);
    Ok((train, validation))
}

/// Load a stored regression dataset, verifying the manifest checksum.
pub fn load_regression(
    data_dir: &Path,
    system: &str,
    role: Role,
) -> Result<inference::RegressionDataset> {
    let file = match role {
        Role::Train => TRAIN_REGRESSION_FILE,
        Role::Test => TEST_REGRESSION_FILE,
    };
    let (_, _, bytes) = verified_bytes(data_dir, system, file)?;
    Ok(serde_json::from_slice(&bytes)?)
}
