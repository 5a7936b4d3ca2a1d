mod common;

use std::fs;
use std::path::Path;

use common::*;
use num_complex::Complex;
use proptest::prelude::*;
use psoct::forward::EquivalentSphere;
use psoct::inverse::{reconstruct, InversionConfig};
use psoct::io::*;
use psoct::measurement::simulate_measurement;
use psoct::Error;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures"))
}

#[test]
fn golden_complex128_decodes_to_known_values() {
    let (data, h) = load_array_with_header::<Complex<f64>>(&fixtures().join("golden_c128.bin")).unwrap();
    assert_eq!(h.shape, vec![2, 2]);
    let want: [Complex<f64>; 4] = [
        Complex::new(1.0, 2.0),
        Complex::new(-0.5, 0.25),
        Complex::new(0.1, -1e-300),
        Complex::new(3.0e8, -0.0),
    ];
    for (a, b) in data.iter().zip(&want) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}

#[test]
fn golden_float32_decodes_and_reencodes_identically() {
    let path = fixtures().join("golden_f32.bin");
    let (data, h) = load_array_with_header::<f32>(&path).unwrap();
    assert_eq!(data, vec![1.5, -2.0, 0.1]);
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("copy.bin");
    save_array(&copy, &data, &h.shape).unwrap();
    assert_eq!(fs::read(&copy).unwrap(), fs::read(&path).unwrap());
}

#[test]
fn golden_rejects_wrong_dtype() {
    let r = load_array_with_header::<Complex<f32>>(&fixtures().join("golden_c128.bin"));
    assert!(matches!(r, Err(Error::Format(_))));
}

#[test]
fn truncated_and_padded_files_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.bin");
    let data: Vec<Complex<f64>> = (0..10).map(|i| Complex::new(i as f64, -(i as f64))).collect();
    save_array_with_header(&p, &data, &[10]).unwrap();
    let bytes = fs::read(&p).unwrap();
    fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
    assert!(matches!(load_array_with_header::<Complex<f64>>(&p), Err(Error::Truncated { .. })));
    let mut longer = bytes.clone();
    longer.push(0);
    fs::write(&p, &longer).unwrap();
    assert!(matches!(load_array_with_header::<Complex<f64>>(&p), Err(Error::Format(_))));
}

#[test]
fn empty_arrays_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("e.bin");
    assert!(matches!(save_array::<f64>(&p, &[], &[0]), Err(Error::EmptyInput(_))));
    fs::write(&p, []).unwrap();
    let h = ArrayHeader {
        file: "e.bin".into(),
        dtype: Dtype::Float64,
        shape: vec![0, 3],
        byte_order: "little".into(),
        order: "row-major".into(),
    };
    assert!(matches!(load_array::<f64>(dir.path(), &h), Err(Error::EmptyInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arrays_round_trip_bit_exact(bits in prop::collection::vec(any::<u64>(), 1..200)) {
        let data: Vec<Complex<f64>> = bits.chunks(2).map(|c| Complex::new(f64::from_bits(c[0]), f64::from_bits(*c.last().unwrap()))).collect();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        save_array_with_header(&p, &data, &[data.len()]).unwrap();
        let (back, _) = load_array_with_header::<Complex<f64>>(&p).unwrap();
        prop_assert_eq!(back.len(), data.len());
        for (a, b) in back.iter().zip(&data) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}

fn small_set(eps_zero: bool, noise: f64) -> psoct::measurement::MeasurementSet<f64> {
    let mut spec = desk_phantom(0.05);
    if eps_zero {
        spec.eps = 0.0;
    }
    let sus = spec.rasterize::<f64>().unwrap();
    let mut cfg = desk_measurement();
    cfg.noise = noise;
    let thetas: Vec<_> = desk_directions().into_iter().step_by(50).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    simulate_measurement(&sus, &standard_setups(), &desk_pulse(), &cfg, &thetas, &EquivalentSphere, &mut rng).unwrap()
}

#[test]
fn measurement_set_round_trips_bit_exact() {
    let set = small_set(false, 0.01);
    let dir = tempfile::tempdir().unwrap();
    save_measurement_set(dir.path(), &set).unwrap();
    let back = load_measurement_set::<f64>(dir.path()).unwrap();
    assert_eq!(back.eps, set.eps);
    assert_eq!(back.thetas, set.thetas);
    for (a, b) in back.data.iter().zip(&set.data).chain(back.background.iter().zip(&set.background)) {
        for s in 0..2 {
            assert_eq!(a[s], b[s]);
            assert!(a[s].i1.iter().zip(&b[s].i1).all(|(x, y)| x.to_bits() == y.to_bits()));
            assert!(a[s].i2.iter().zip(&b[s].i2).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
    // writing what was read reproduces the files byte for byte
    let again = tempfile::tempdir().unwrap();
    save_measurement_set(again.path(), &back).unwrap();
    let name = &read_json::<MeasurementManifest>(&dir.path().join(MEASUREMENT_MANIFEST)).unwrap().directions[0].data[0];
    assert_eq!(fs::read(dir.path().join(name)).unwrap(), fs::read(again.path().join(name)).unwrap());
}

#[test]
fn zero_contrast_data_equals_background() {
    let set = small_set(true, 0.0);
    for (d, b) in set.data.iter().zip(&set.background) {
        assert_eq!(d, b);
    }
}

#[test]
fn interferogram_csv_has_expected_columns() {
    let set = small_set(false, 0.01);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("ig.csv");
    write_interferogram(&p, &set.data[0][0]).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().next().unwrap(), "l,I1,I2");
    assert_eq!(text.lines().count(), 1 + set.data[0][0].i1.len());
    assert!(sidecar_path(&p).exists());
    assert_eq!(read_interferogram::<f64>(&p).unwrap(), set.data[0][0]);
}

#[test]
fn corrupted_manifests_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    save_measurement_set(dir.path(), &small_set(false, 0.01)).unwrap();
    let m = dir.path().join(MEASUREMENT_MANIFEST);
    let text = fs::read_to_string(&m).unwrap();
    fs::write(&m, &text[..text.len() / 2]).unwrap();
    assert!(matches!(load_measurement_set::<f64>(dir.path()), Err(Error::Json { .. })));
}

#[test]
fn samples_and_reconstruction_round_trip() {
    let spec = desk_phantom(0.0);
    let samples = desk_samples(&spec, 3);
    let dir = tempfile::tempdir().unwrap();
    let path = save_samples(dir.path(), "samples", 1.0, &samples).unwrap();
    let (c, back) = load_samples(&path).unwrap();
    assert_eq!(c, 1.0);
    assert_eq!(back, samples);

    let grid = psoct::Grid::from_spec(&spec.grid).unwrap();
    let rec = reconstruct(grid, 0.0, &samples, &EquivalentSphere, &InversionConfig::default()).unwrap();
    let path = save_reconstruction(dir.path(), spec.grid, 0.0, &rec).unwrap();
    let (man, psi, points) = load_reconstruction(&path).unwrap();
    assert!(man.closed_form);
    assert_eq!(man.samples, rec.points.len());
    assert_eq!(psi, rec.psi);
    assert_eq!(points.len(), 7 * rec.points.len());
    assert_eq!(points[0], rec.points[0].k);
}
