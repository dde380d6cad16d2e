//! Reports must be byte-identical regardless of how the work is scheduled:
//! trial seeds are derived, not drawn, and aggregation runs in trial order.

use clusterlab::experiments::{
    alpha_zero_experiment, close_pair_experiment, scaling_experiment, urn_validation,
};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("pool")
        .install(f)
}

fn csv_of(write: impl FnOnce(&mut Vec<u8>)) -> Vec<u8> {
    let mut buf = Vec::new();
    write(&mut buf);
    buf
}

#[test]
fn scaling_csv_is_stable_across_thread_counts() {
    let one = in_pool(1, || scaling_experiment(2, 0.25, &[16, 32, 64, 128], 10, 5).unwrap());
    let many = in_pool(7, || scaling_experiment(2, 0.25, &[16, 32, 64, 128], 10, 5).unwrap());
    assert_eq!(
        csv_of(|b| one.write_csv(b).unwrap()),
        csv_of(|b| many.write_csv(b).unwrap()),
    );
}

#[test]
fn close_pair_csv_is_stable_across_thread_counts() {
    let one = in_pool(1, || close_pair_experiment(2, 0.5, &[32, 64, 128], 16, 0.1, 9).unwrap());
    let many = in_pool(5, || close_pair_experiment(2, 0.5, &[32, 64, 128], 16, 0.1, 9).unwrap());
    assert_eq!(
        csv_of(|b| one.write_csv(b).unwrap()),
        csv_of(|b| many.write_csv(b).unwrap()),
    );
}

#[test]
fn urn_csv_is_stable_across_thread_counts() {
    let one = in_pool(1, || urn_validation(&[2, 7], 150, 64, 3).unwrap());
    let many = in_pool(3, || urn_validation(&[2, 7], 150, 64, 3).unwrap());
    assert_eq!(
        csv_of(|b| one.write_csv(b).unwrap()),
        csv_of(|b| many.write_csv(b).unwrap()),
    );
}

#[test]
fn alpha_zero_csv_is_stable_across_thread_counts() {
    let one = in_pool(1, || alpha_zero_experiment(2, &[32, 64, 128, 256], 12, 4).unwrap());
    let many = in_pool(6, || alpha_zero_experiment(2, &[32, 64, 128, 256], 12, 4).unwrap());
    assert_eq!(
        csv_of(|b| one.write_csv(b).unwrap()),
        csv_of(|b| many.write_csv(b).unwrap()),
    );
}
