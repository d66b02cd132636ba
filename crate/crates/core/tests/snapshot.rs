mod common;

use common::{random_field, rng};
use nls_core::spectral::{load_snapshot, read_snapshot, save_snapshot, write_snapshot};
use nls_core::{Boundary, Error, Field64, Grid, Grid64};

#[test]
fn snapshot_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(41);
    let grids = [
        Grid64::periodic(1, 64).unwrap(),
        Grid64::periodic(2, 8).unwrap(),
        Grid64::dirichlet(32).unwrap(),
        Grid::new(3, 4, Boundary::Periodic, &[1.0, 2.0, 3.0]).unwrap(),
    ];
    for (n, grid) in grids.iter().enumerate() {
        let u = random_field(grid, None, &mut r);
        let path = dir.path().join(format!("f{n}.nlsf"));
        save_snapshot(&u, &path).unwrap();
        let back: Field64 = load_snapshot(&path).unwrap();
        assert_eq!(back.grid(), grid);
        assert_eq!(back, u);
        let again = dir.path().join(format!("g{n}.nlsf"));
        save_snapshot(&back, &again).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    }
}

#[test]
fn snapshot_rejects_trailing_bytes() {
    let grid = Grid64::periodic(1, 8).unwrap();
    let u = random_field(&grid, None, &mut rng(42));
    let mut bytes = Vec::new();
    write_snapshot(&u, &mut bytes).unwrap();
    bytes.push(0);
    assert!(matches!(read_snapshot::<f64, _>(bytes.as_slice()), Err(Error::Snapshot(_))));
}
