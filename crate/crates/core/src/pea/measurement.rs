use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Dispersive readout of the first qubit: the projected state is `|1⟩` with
/// probability `p_true`, and the recorded value is that state's label plus
/// Gaussian noise of width `sigma0` or `sigma1`.
pub fn sample_measurement<R: Rng + ?Sized>(
    p_true: f64,
    sigma0: f64,
    sigma1: f64,
    rng: &mut R,
) -> f64 {
    let excited = rng.random::<f64>() < p_true;
    let noise: f64 = rng.sample(StandardNormal);
    if excited {
        1.0 + sigma1 * noise
    } else {
        sigma0 * noise
    }
}

/// Independent random stream for target `j`, repetition `k`.
pub fn run_stream(master_seed: u64, target: usize, repetition: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((target as u64) << 32) | (repetition as u64 & 0xffff_ffff));
    rng
}
