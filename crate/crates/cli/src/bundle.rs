//! Grid file bundles: a JSON meta document next to one CSV matrix (real
//! data) or a `_re`/`_im` pair.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sclg::grid::{Axis, GridSpec, SampledGrid};
use sclg::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip any f64.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io_err = |e| CliError::io(path, e);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let name = path.file_name().ok_or_else(|| CliError::usage(format!("`{}` is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(bytes)?;
        f.sync_all()
    });
    if let Err(e) = result.and_then(|_| fs::rename(&tmp, path)) {
        let _ = fs::remove_file(&tmp);
        return Err(io_err(e));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisMeta {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisMeta {
    fn new(name: &str, axis: Axis) -> Self {
        Self { name: name.to_string(), min: axis.min, max: axis.max, count: axis.count }
    }

    fn axis(&self) -> CliResult<Axis> {
        Ok(Axis::new(self.min, self.max, self.count)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataFiles {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub format_version: u32,
    pub quantity: String,
    pub h: f64,
    pub time: Option<f64>,
    pub axes: [AxisMeta; 2],
    pub files: DataFiles,
}

/// Strips a `.json` or `.csv` extension so `--out field.json` and
/// `--out field` name the same bundle.
pub fn stem_of(path: &Path) -> PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json" | "csv") => path.with_extension(""),
        _ => path.to_path_buf(),
    }
}

fn with_suffix(stem: &Path, suffix: &str, ext: &str) -> PathBuf {
    let mut name = stem.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    name.push(".");
    name.push(ext);
    stem.with_file_name(name)
}

pub fn meta_path(stem: &Path) -> PathBuf {
    with_suffix(stem, "", "json")
}

fn matrix_csv(grid: &SampledGrid, part: impl Fn(Complex64) -> f64) -> io::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for i in 0..grid.x_axis.count {
        w.write_record(grid.row(i).iter().map(|&v| format_value(part(v))))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

fn write_matrix(path: &Path, grid: &SampledGrid, part: impl Fn(Complex64) -> f64) -> CliResult<()> {
    let bytes = matrix_csv(grid, part).map_err(|e| CliError::io(path, e))?;
    write_atomic(path, &bytes)
}

fn file_name(path: &Path) -> String {
    path.file_name().unwrap_or_default().to_string_lossy().into_owned()
}

/// Writes `grid` under `stem` with the given axis names. A grid whose
/// imaginary part is identically zero gets a single `stem.csv`.
pub fn write_bundle(stem: &Path, grid: &SampledGrid, axis_names: [&str; 2]) -> CliResult<BundleMeta> {
    let real = grid.values().iter().all(|v| v.im == 0.0);
    let files = if real {
        let data = with_suffix(stem, "", "csv");
        write_matrix(&data, grid, |v| v.re)?;
        DataFiles { data: Some(file_name(&data)), re: None, im: None }
    } else {
        let re = with_suffix(stem, "_re", "csv");
        let im = with_suffix(stem, "_im", "csv");
        write_matrix(&re, grid, |v| v.re)?;
        write_matrix(&im, grid, |v| v.im)?;
        DataFiles { data: None, re: Some(file_name(&re)), im: Some(file_name(&im)) }
    };
    let meta = BundleMeta {
        format_version: FORMAT_VERSION,
        quantity: grid.quantity.clone(),
        h: grid.h,
        time: grid.time,
        axes: [AxisMeta::new(axis_names[0], grid.x_axis), AxisMeta::new(axis_names[1], grid.y_axis)],
        files,
    };
    write_json(&meta_path(stem), &meta)?;
    Ok(meta)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| invalid(path, e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::io(path, io::Error::new(io::ErrorKind::InvalidData, e)))
}

fn invalid(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::io(path, io::Error::new(io::ErrorKind::InvalidData, msg.into()))
}

/// Reads a CSV matrix of exactly `rows × cols` values.
pub fn read_matrix(path: &Path, rows: usize, cols: usize) -> CliResult<Vec<f64>> {
    let mut r =
        csv::ReaderBuilder::new().has_headers(false).from_path(path).map_err(|e| invalid(path, e.to_string()))?;
    let mut out = Vec::with_capacity(rows * cols);
    for rec in r.records() {
        let rec = rec.map_err(|e| invalid(path, e.to_string()))?;
        if rec.len() != cols {
            return Err(invalid(path, format!("row has {} columns, expected {cols}", rec.len())));
        }
        for field in rec.iter() {
            out.push(field.parse::<f64>().map_err(|_| invalid(path, format!("bad number `{field}`")))?);
        }
    }
    if out.len() != rows * cols {
        return Err(invalid(path, format!("{} values, expected {}", out.len(), rows * cols)));
    }
    Ok(out)
}

/// Loads the bundle whose meta document is `stem.json`.
pub fn read_bundle(stem: &Path) -> CliResult<(BundleMeta, SampledGrid)> {
    let path = meta_path(stem);
    let meta: BundleMeta = read_json(&path)?;
    if meta.format_version != FORMAT_VERSION {
        return Err(invalid(&path, format!("unsupported format_version {}", meta.format_version)));
    }
    let spec = GridSpec::new(meta.axes[0].axis()?, meta.axes[1].axis()?);
    let (rows, cols) = (spec.x.count, spec.y.count);
    let dir = stem.parent().unwrap_or(Path::new(""));
    let values: Vec<Complex64> = match (&meta.files.data, &meta.files.re, &meta.files.im) {
        (Some(data), None, None) => {
            read_matrix(&dir.join(data), rows, cols)?.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
        }
        (None, Some(re), Some(im)) => {
            let re = read_matrix(&dir.join(re), rows, cols)?;
            let im = read_matrix(&dir.join(im), rows, cols)?;
            re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
        }
        _ => return Err(invalid(&path, "files must name either `data` or both `re` and `im`")),
    };
    let mut grid = SampledGrid::from_values(meta.h, spec, meta.quantity.clone(), values)?;
    grid.time = meta.time;
    Ok((meta, grid))
}
