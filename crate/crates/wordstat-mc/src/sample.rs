use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordstat::onesample::ProbabilityVector;
use wordstat::{Composition, Word};

/// The generator for sample `index` under `seed`: stream `index` of ChaCha8.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` independent letters from `p`, by inverse CDF.
pub fn sample_one<R: Rng + ?Sized>(n: usize, p: &ProbabilityVector, rng: &mut R) -> Word {
    let mut cdf = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for x in p.values() {
        acc += x.to_f64().unwrap_or(0.0);
        cdf.push(acc);
    }
    let last = (p.len() - 1) as u8;
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cdf.iter().position(|&c| u < c).map_or(last, |i| i as u8)
        })
        .collect()
}

/// A uniformly random word with letter counts `n`.
pub fn sample_multi<R: Rng + ?Sized>(n: &Composition, rng: &mut R) -> Word {
    let mut w = n.first_word();
    w.shuffle(rng);
    w
}
