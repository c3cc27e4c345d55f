use kummer_core::io::{CsvTable, SpectralDataset};
use kummer_core::{quantum, semiclassics, ModelSpec};

#[test]
fn dataset_json_round_trip() {
    let spec = ModelSpec::new(2, 1, 40, 0.5, 1.0).unwrap();
    let mut ds = SpectralDataset::new(spec);
    let res = quantum::eigen_spectrum(&spec).unwrap();
    ds.histogram = Some(quantum::dos_histogram(&res, 10).unwrap());
    ds.scaled_eigenvalues = res.scaled_eigenvalues;
    ds.semiclassical = Some(semiclassics::quantize_double_well(&spec).unwrap());
    ds.dos = Some(semiclassics::dos_curve(&spec, &[0.0, 0.2]).unwrap());
    let text = ds.to_json().unwrap();
    assert!(text.contains("\"N\": 40"));
    let back = SpectralDataset::from_json(&text).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn csv_is_byte_identical_on_repeat() {
    let spec = ModelSpec::new(3, 3, 360, 0.08, 1.0).unwrap();
    let make = || {
        let res = quantum::eigen_spectrum(&spec).unwrap();
        let mut t = CsvTable::new(["index", "energy"]).with_model(&spec);
        for (i, e) in res.scaled_eigenvalues.iter().enumerate() {
            t.push(vec![i as f64, *e]);
        }
        t.to_csv_string()
    };
    assert_eq!(make(), make());
}
