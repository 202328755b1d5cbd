//! CSV and JSON file formats.
//!
//! | file | columns |
//! |------|---------|
//! | shots | `shot_index, alpha_re, alpha_im, theta_coh, theta_total, p_up, n_up, photons` |
//! | photon counts | `shot_index, photons` |
//! | histogram | `bin_lo, bin_hi, count` |
//! | sweep | `detuning_rad_per_s, detuning_khz, p_up_mean, p_up_err, p_up_model` |
//! | heating points | `delay_s, nbar, nbar_err` |
//!
//! JSON outputs are wrapped in an [`Envelope`] carrying the schema version,
//! the command, the seed and the full configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::config::RawConfig;
use crate::error::{Error, Result};
use crate::inference::{HeatingPoint, SweepPoint};
use crate::mc::{Histogram, ShotRecord};
use crate::physics::Amplitude;
use crate::units;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub generator: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: Option<RawConfig>,
    pub result: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, config: Option<&RawConfig>, result: T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            generator: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            command: command.to_string(),
            seed: config.map(|c| c.seed),
            config: config.cloned(),
            result,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| schema(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct ShotRow {
    shot_index: u64,
    alpha_re: f64,
    alpha_im: f64,
    theta_coh: f64,
    theta_total: f64,
    p_up: f64,
    n_up: u64,
    photons: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PhotonRow {
    shot_index: u64,
    photons: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct HistogramRow {
    bin_lo: f64,
    bin_hi: f64,
    count: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub detuning_rad_per_s: f64,
    pub detuning_khz: f64,
    pub p_up_mean: f64,
    pub p_up_err: f64,
    pub p_up_model: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct HeatingRow {
    delay_s: f64,
    nbar: f64,
    nbar_err: f64,
}

/// Contents of a shots file: full records or photon counts only.
#[derive(Clone, Debug, PartialEq)]
pub enum ShotData {
    Records(Vec<ShotRecord>),
    Photons(Vec<u64>),
}

impl ShotData {
    pub fn len(&self) -> usize {
        match self {
            ShotData::Records(r) => r.len(),
            ShotData::Photons(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn schema(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Schema { path: path.into(), message: e.to_string() }
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows<T: DeserializeOwned>(path: &Path, expected: &[&str]) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers().map_err(|e| schema(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(schema(path, format!("expected columns {expected:?}, found {:?}", headers.iter().collect::<Vec<_>>())));
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| schema(path, format!("row {}: {e}", i + 1))))
        .collect()
}

const SHOT_COLUMNS: [&str; 8] = ["shot_index", "alpha_re", "alpha_im", "theta_coh", "theta_total", "p_up", "n_up", "photons"];
const PHOTON_COLUMNS: [&str; 2] = ["shot_index", "photons"];
const HEATING_COLUMNS: [&str; 3] = ["delay_s", "nbar", "nbar_err"];

pub fn write_shots(path: &Path, shots: &[ShotRecord]) -> Result<()> {
    write_rows(
        path,
        shots.iter().map(|s| ShotRow {
            shot_index: s.index,
            alpha_re: s.alpha_k.re,
            alpha_im: s.alpha_k.im,
            theta_coh: s.theta_coh,
            theta_total: s.theta_total,
            p_up: s.p_up,
            n_up: s.n_up,
            photons: s.photons,
        }),
    )
}

/// Reads either schema, chosen by the header row.
pub fn read_shots(path: &Path) -> Result<ShotData> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers().map_err(|e| schema(path, e))?.clone();
    let data = if headers.len() == PHOTON_COLUMNS.len() {
        ShotData::Photons(read_rows::<PhotonRow>(path, &PHOTON_COLUMNS)?.into_iter().map(|r| r.photons).collect())
    } else {
        ShotData::Records(
            read_rows::<ShotRow>(path, &SHOT_COLUMNS)?
                .into_iter()
                .map(|r| ShotRecord {
                    index: r.shot_index,
                    alpha_k: Amplitude::new(r.alpha_re, r.alpha_im),
                    theta_coh: r.theta_coh,
                    theta_total: r.theta_total,
                    p_up: r.p_up,
                    n_up: r.n_up,
                    photons: r.photons,
                })
                .collect(),
        )
    };
    if data.is_empty() {
        return Err(schema(path, "no data rows"));
    }
    Ok(data)
}

pub fn write_photons(path: &Path, photons: &[u64]) -> Result<()> {
    write_rows(path, photons.iter().enumerate().map(|(i, &p)| PhotonRow { shot_index: i as u64, photons: p }))
}

pub fn write_histogram(path: &Path, h: &Histogram) -> Result<()> {
    write_rows(
        path,
        h.bin_edges.windows(2).zip(&h.counts).map(|(e, &count)| HistogramRow { bin_lo: e[0], bin_hi: e[1], count }),
    )
}

pub fn write_sweep(path: &Path, points: &[SweepPoint], model: &[f64]) -> Result<()> {
    write_rows(
        path,
        points.iter().zip(model).map(|(p, &m)| SweepRow {
            detuning_rad_per_s: p.detuning_delta,
            detuning_khz: units::to_khz(p.detuning_delta),
            p_up_mean: p.p_up_mean,
            p_up_err: p.p_up_err,
            p_up_model: m,
        }),
    )
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepPoint>> {
    let rows: Vec<SweepRow> = read_rows(path, &["detuning_rad_per_s", "detuning_khz", "p_up_mean", "p_up_err", "p_up_model"])?;
    Ok(rows
        .into_iter()
        .map(|r| SweepPoint { detuning_delta: r.detuning_rad_per_s, p_up_mean: r.p_up_mean, p_up_err: r.p_up_err })
        .collect())
}

pub fn write_heating(path: &Path, points: &[HeatingPoint]) -> Result<()> {
    write_rows(path, points.iter().map(|p| HeatingRow { delay_s: p.delay, nbar: p.nbar, nbar_err: p.nbar_err }))
}

pub fn read_heating(path: &Path) -> Result<Vec<HeatingPoint>> {
    let rows: Vec<HeatingRow> = read_rows(path, &HEATING_COLUMNS)?;
    if rows.is_empty() {
        return Err(Error::Empty("no heating points in file"));
    }
    Ok(rows.into_iter().map(|r| HeatingPoint { delay: r.delay_s, nbar: r.nbar, nbar_err: r.nbar_err }).collect())
}
