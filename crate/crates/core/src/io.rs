//! On-disk formats.
//!
//! Arrays are raw little-endian row-major buffers described by a JSON header.
//! Interferograms are CSV files `l,I1,I2` with a JSON sidecar holding the
//! sampling metadata. Floats are written in shortest round-trip form, so both
//! formats reload bit-exactly.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::grid::GridSpec;
use crate::inverse::{BlockReport, Reconstruction};
use crate::jones::{PolarizationSetup, SetupSpec};
use crate::math::direction::Direction;
use crate::math::pulse::PulseEnvelope;
use crate::measurement::{Interferogram, KSpaceSample, LGrid, MeasurementSet, OmegaGrid};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dtype {
    Float32,
    Float64,
    Complex64,
    Complex128,
}

impl Dtype {
    pub fn size(self) -> usize {
        match self {
            Dtype::Float32 => 4,
            Dtype::Float64 | Dtype::Complex64 => 8,
            Dtype::Complex128 => 16,
        }
    }
}

/// Scalars that can be stored in an array file.
pub trait Element: Copy {
    const DTYPE: Dtype;
    fn put(&self, out: &mut Vec<u8>);
    fn get(bytes: &[u8]) -> Self;
}

macro_rules! real_element {
    ($t:ty, $d:expr, $n:expr) => {
        impl Element for $t {
            const DTYPE: Dtype = $d;
            fn put(&self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }
            fn get(bytes: &[u8]) -> Self {
                let mut b = [0u8; $n];
                b.copy_from_slice(&bytes[..$n]);
                <$t>::from_le_bytes(b)
            }
        }

        impl Element for Complex<$t> {
            const DTYPE: Dtype = if $n == 4 { Dtype::Complex64 } else { Dtype::Complex128 };
            fn put(&self, out: &mut Vec<u8>) {
                self.re.put(out);
                self.im.put(out);
            }
            fn get(bytes: &[u8]) -> Self {
                Complex::new(<$t>::get(bytes), <$t>::get(&bytes[$n..]))
            }
        }
    };
}

real_element!(f32, Dtype::Float32, 4);
real_element!(f64, Dtype::Float64, 8);

/// Description of one raw array file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayHeader {
    /// File name relative to the directory holding the header.
    pub file: String,
    pub dtype: Dtype,
    pub shape: Vec<usize>,
    #[serde(default = "little")]
    pub byte_order: String,
    #[serde(default = "row_major")]
    pub order: String,
}

fn little() -> String {
    "little".into()
}

fn row_major() -> String {
    "row-major".into()
}

impl ArrayHeader {
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn byte_len(&self) -> u64 {
        (self.len() * self.dtype.size()) as u64
    }
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

fn file_name(path: &Path) -> Result<String> {
    path.file_name()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no file name", path.display())))
}

/// Writes `data` to `path` and returns its header. The header is not written.
pub fn save_array<E: Element>(path: &Path, data: &[E], shape: &[usize]) -> Result<ArrayHeader> {
    if data.is_empty() {
        return Err(Error::EmptyInput("cannot save an empty array"));
    }
    let n: usize = shape.iter().product();
    if n != data.len() {
        return Err(Error::Shape(format!("shape {shape:?} holds {n} elements, data has {}", data.len())));
    }
    let mut bytes = Vec::with_capacity(n * E::DTYPE.size());
    for x in data {
        x.put(&mut bytes);
    }
    fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
    Ok(ArrayHeader {
        file: file_name(path)?,
        dtype: E::DTYPE,
        shape: shape.to_vec(),
        byte_order: little(),
        order: row_major(),
    })
}

/// Reads the array described by `header`, resolving its file against `dir`.
pub fn load_array<E: Element>(dir: &Path, header: &ArrayHeader) -> Result<Vec<E>> {
    if header.dtype != E::DTYPE {
        return Err(Error::Format(format!("array {} is {:?}, expected {:?}", header.file, header.dtype, E::DTYPE)));
    }
    if header.byte_order != "little" || header.order != "row-major" {
        return Err(Error::Format(format!(
            "array {} is {} {}, only little-endian row-major is supported",
            header.file, header.byte_order, header.order
        )));
    }
    if header.is_empty() {
        return Err(Error::EmptyInput("array header describes an empty array"));
    }
    let path = dir.join(&header.file);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let expected = header.byte_len();
    if (bytes.len() as u64) < expected {
        return Err(Error::Truncated {
            path,
            expected,
            found: bytes.len() as u64,
        });
    }
    if bytes.len() as u64 != expected {
        return Err(Error::Format(format!(
            "{} has {} bytes, header implies {expected}",
            path.display(),
            bytes.len()
        )));
    }
    Ok(bytes.chunks_exact(E::DTYPE.size()).map(E::get).collect())
}

/// `<path>` with `.json` appended to the full file name.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// [`save_array`] plus a header file next to the data.
pub fn save_array_with_header<E: Element>(path: &Path, data: &[E], shape: &[usize]) -> Result<ArrayHeader> {
    let h = save_array(path, data, shape)?;
    write_json(&sidecar_path(path), &h)?;
    Ok(h)
}

pub fn load_array_with_header<E: Element>(path: &Path) -> Result<(Vec<E>, ArrayHeader)> {
    let h: ArrayHeader = read_json(&sidecar_path(path))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok((load_array(dir, &h)?, h))
}

/// Sampling metadata stored next to an interferogram CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferogramMeta {
    pub l_grid: LGrid,
    pub omegas: OmegaGrid,
    pub theta: [f64; 3],
    pub rho: f64,
    pub c: f64,
    pub setup: SetupSpec,
    pub pulse: PulseEnvelope,
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Shortest string that parses back to the same `f64`.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_interferogram<T: Real>(path: &Path, ig: &Interferogram<T>) -> Result<()> {
    ig.validate()?;
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["l", "I1", "I2"]).map_err(|e| csv_error(path, e))?;
    for i in 0..ig.l_grid.count {
        let l: f64 = ig.l_grid.value(i);
        w.write_record([fmt_f64(l), fmt_f64(f64_of(ig.i1[i])), fmt_f64(f64_of(ig.i2[i]))])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    let t = ig.theta.theta();
    let meta = InterferogramMeta {
        l_grid: ig.l_grid,
        omegas: ig.omegas,
        theta: [f64_of(t[0]), f64_of(t[1]), f64_of(t[2])],
        rho: f64_of(ig.rho),
        c: f64_of(ig.c),
        setup: ig.setup.spec(),
        pulse: ig.pulse.clone(),
    };
    write_json(&sidecar_path(path), &meta)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}

pub fn read_interferogram<T: Real>(path: &Path) -> Result<Interferogram<T>> {
    let meta: InterferogramMeta = read_json(&sidecar_path(path))?;
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["l", "I1", "I2"] {
        return Err(Error::Format(format!("{}: expected columns l,I1,I2", path.display())));
    }
    let mut i1 = Vec::new();
    let mut i2 = Vec::new();
    let tol = 1e-9 * meta.l_grid.span().abs().max(meta.l_grid.step.abs());
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        if rec.len() != 3 {
            return Err(Error::Format(format!("{} row {row}: {} fields", path.display(), rec.len())));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("{} row {row}: {e}", path.display())))
        };
        let l = parse(&rec[0])?;
        if row >= meta.l_grid.count || (l - meta.l_grid.value::<f64>(row)).abs() > tol {
            return Err(Error::Format(format!(
                "{} row {row}: mirror position {l} does not match the sidecar grid",
                path.display()
            )));
        }
        i1.push(lit::<T>(parse(&rec[1])?));
        i2.push(lit::<T>(parse(&rec[2])?));
    }
    let theta = Direction::new(meta.theta.map(lit::<T>))?;
    let ig = Interferogram {
        l_grid: meta.l_grid,
        omegas: meta.omegas,
        theta,
        rho: lit(meta.rho),
        c: lit(meta.c),
        setup: PolarizationSetup::from_spec(&meta.setup)?,
        pulse: meta.pulse,
        i1,
        i2,
    };
    ig.validate()?;
    Ok(ig)
}

/// Index of the interferogram files of a [`MeasurementSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementManifest {
    pub eps: f64,
    pub directions: Vec<DirectionFiles>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionFiles {
    pub theta: [f64; 3],
    pub data: [String; 2],
    pub background: [String; 2],
}

pub const MEASUREMENT_MANIFEST: &str = "measurement.json";

/// Writes every interferogram of `set` into `dir` plus `measurement.json`.
pub fn save_measurement_set<T: Real>(dir: &Path, set: &MeasurementSet<T>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut directions = Vec::with_capacity(set.thetas.len());
    for (d, theta) in set.thetas.iter().enumerate() {
        let name = |kind: &str, s: usize| format!("{kind}_{d:04}_s{}.csv", s + 1);
        let data = [name("data", 0), name("data", 1)];
        let background = [name("background", 0), name("background", 1)];
        for s in 0..2 {
            write_interferogram(&dir.join(&data[s]), &set.data[d][s])?;
            write_interferogram(&dir.join(&background[s]), &set.background[d][s])?;
        }
        let t = theta.theta();
        directions.push(DirectionFiles {
            theta: [f64_of(t[0]), f64_of(t[1]), f64_of(t[2])],
            data,
            background,
        });
    }
    write_json(
        &dir.join(MEASUREMENT_MANIFEST),
        &MeasurementManifest {
            eps: f64_of(set.eps),
            directions,
        },
    )
}

pub fn load_measurement_set<T: Real>(dir: &Path) -> Result<MeasurementSet<T>> {
    let m: MeasurementManifest = read_json(&dir.join(MEASUREMENT_MANIFEST))?;
    if m.directions.is_empty() {
        return Err(Error::EmptyInput("measurement manifest lists no directions"));
    }
    let mut thetas = Vec::new();
    let mut data = Vec::new();
    let mut background = Vec::new();
    for d in &m.directions {
        let read = |f: &String| read_interferogram::<T>(&dir.join(f));
        let pair = [read(&d.data[0])?, read(&d.data[1])?];
        let bg = [read(&d.background[0])?, read(&d.background[1])?];
        if pair.iter().chain(&bg).any(|ig| ig.theta.theta().map(f64_of) != d.theta) {
            return Err(Error::Format(format!("direction {:?} disagrees with its interferograms", d.theta)));
        }
        thetas.push(Direction::new(d.theta.map(lit::<T>))?);
        data.push(pair);
        background.push(bg);
    }
    Ok(MeasurementSet {
        eps: lit(m.eps),
        thetas,
        data,
        background,
    })
}

/// Reciprocal samples on disk: `m` is `[n, 2, 2]` complex, `coords` is
/// `[n, 4]` real holding `(ω, ϑ₁, ϑ₂, ϑ₃)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub c: f64,
    pub m: ArrayHeader,
    pub coords: ArrayHeader,
}

pub fn save_samples(dir: &Path, stem: &str, c: f64, samples: &[KSpaceSample<f64>]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let m: Vec<Complex<f64>> = samples.iter().flat_map(|s| [s.m[0][0], s.m[0][1], s.m[1][0], s.m[1][1]]).collect();
    let coords: Vec<f64> = samples
        .iter()
        .flat_map(|s| {
            let t = s.theta.theta();
            [s.omega, t[0], t[1], t[2]]
        })
        .collect();
    let n = samples.len();
    let manifest = SampleManifest {
        c,
        m: save_array(&dir.join(format!("{stem}_m.bin")), &m, &[n, 2, 2])?,
        coords: save_array(&dir.join(format!("{stem}_coords.bin")), &coords, &[n, 4])?,
    };
    let path = dir.join(format!("{stem}.json"));
    write_json(&path, &manifest)?;
    Ok(path)
}

pub fn load_samples(path: &Path) -> Result<(f64, Vec<KSpaceSample<f64>>)> {
    let man: SampleManifest = read_json(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let m: Vec<Complex<f64>> = load_array(dir, &man.m)?;
    let coords: Vec<f64> = load_array(dir, &man.coords)?;
    let n = man.coords.shape.first().copied().unwrap_or(0);
    if man.m.shape != [n, 2, 2] || man.coords.shape != [n, 4] {
        return Err(Error::Shape(format!(
            "sample arrays have shapes {:?} and {:?}",
            man.m.shape, man.coords.shape
        )));
    }
    let samples = (0..n)
        .map(|i| {
            let c4 = &coords[4 * i..4 * i + 4];
            let mm = &m[4 * i..4 * i + 4];
            KSpaceSample::new(c4[0], man.c, Direction::new([c4[1], c4[2], c4[3]])?, [[mm[0], mm[1]], [mm[2], mm[3]]])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((man.c, samples))
}

/// Reconstruction on disk. `psi` is `[n, 4]` complex in the order
/// `(ψ̃₁₁, ψ̃₁₂, ψ̃₂₂, ψ̃₃₃)`, `points` is `[n, 7]` real holding
/// `(k, ϑ₁, ϑ₂, ϑ₃, v₁, v₂, v₃)`, and `spatial` is `[4, n₀, n₁, n₂]` complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReconstructionManifest {
    pub grid: GridSpec,
    pub chi0: f64,
    /// True when every block was solved sample by sample.
    pub closed_form: bool,
    pub psi33_solved: bool,
    pub samples: usize,
    pub excluded: usize,
    pub blocks: Vec<BlockReport>,
    pub coverage: Option<f64>,
    pub psi: ArrayHeader,
    pub points: ArrayHeader,
    #[serde(default)]
    pub spatial: Option<ArrayHeader>,
}

pub const RECONSTRUCTION_MANIFEST: &str = "reconstruction.json";

pub fn save_reconstruction(dir: &Path, grid: GridSpec, chi0: f64, rec: &Reconstruction<f64>) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let n = rec.points.len();
    let psi: Vec<Complex<f64>> = rec.psi.iter().flatten().copied().collect();
    let points: Vec<f64> = rec
        .points
        .iter()
        .flat_map(|p| {
            let t = p.theta.theta();
            [p.k, t[0], t[1], t[2], p.v[0], p.v[1], p.v[2]]
        })
        .collect();
    let spatial = match &rec.spatial {
        Some(f) => {
            let flat: Vec<Complex<f64>> = f.iter().flatten().copied().collect();
            Some(save_array(&dir.join("spatial.bin"), &flat, &[4, grid.n[0], grid.n[1], grid.n[2]])?)
        }
        None => None,
    };
    let man = ReconstructionManifest {
        grid,
        chi0,
        closed_form: rec.blocks.iter().all(|b| b.closed_form),
        psi33_solved: rec.psi33_solved,
        samples: n,
        excluded: rec.excluded,
        blocks: rec.blocks.clone(),
        coverage: rec.coverage,
        psi: save_array(&dir.join("psi.bin"), &psi, &[n, 4])?,
        points: save_array(&dir.join("points.bin"), &points, &[n, 7])?,
        spatial,
    };
    let path = dir.join(RECONSTRUCTION_MANIFEST);
    write_json(&path, &man)?;
    Ok(path)
}

/// Manifest, `ψ̃` per sample and the `[n, 7]` point table.
pub fn load_reconstruction(path: &Path) -> Result<(ReconstructionManifest, Vec<[Complex<f64>; 4]>, Vec<f64>)> {
    let man: ReconstructionManifest = read_json(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let n = man.samples;
    if man.psi.shape != [n, 4] || man.points.shape != [n, 7] {
        return Err(Error::Shape(format!(
            "manifest lists {n} samples, arrays have shapes {:?} and {:?}",
            man.psi.shape, man.points.shape
        )));
    }
    let flat: Vec<Complex<f64>> = load_array(dir, &man.psi)?;
    let points: Vec<f64> = load_array(dir, &man.points)?;
    let psi = flat.chunks_exact(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
    Ok((man, psi, points))
}
