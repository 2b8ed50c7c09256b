pub mod enumerate;
pub mod meanfield;
pub mod phase;
pub mod sample;
pub mod verify;

/// `steps` evenly spaced points on `[lo, hi]`; `[lo]` when `steps == 1`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}
