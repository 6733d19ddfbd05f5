//! On a code small enough to enumerate, ORBGRAND must return a noise pattern
//! of minimum logistic weight among all patterns that reach a codeword.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padfec::channel::{self, ChannelConfig};
use padfec::codec::{generate_rlc, receive_separate};
use padfec::orbgrand::{GuessConfig, PatternOrder, ReliabilityOrder};
use padfec::BitWord;

const N: usize = 8;
const K: usize = 4;

#[test]
fn orbgrand_finds_a_minimum_logistic_weight_codeword() {
    let code = generate_rlc(N, K, 11).unwrap();
    let config = GuessConfig {
        order: PatternOrder::Logistic,
        max_queries: 1 << N,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut unique = 0;
    for trial in 0..1000 {
        let message = BitWord::from_bits((0..K).map(|_| rng.random::<bool>()));
        let codeword = code.encode(&message).unwrap();
        let ebn0_db = [0.0, 2.0, 4.0][trial % 3];
        let cfg = ChannelConfig::new(ebn0_db, K as f64 / N as f64, 0).unwrap();
        let soft = channel::add_noise_with(&channel::modulate(&codeword), &cfg, &mut rng);

        let hard = channel::hard_decision(&soft);
        let order = ReliabilityOrder::from_reliabilities(&soft.reliabilities());
        let weights: Vec<(usize, BitWord)> = (0u32..1 << N)
            .filter_map(|mask| {
                let mut word = hard;
                let mut weight = 0;
                for position in (0..N).filter(|p| mask >> p & 1 == 1) {
                    word.flip(position);
                    weight += order.rank_of(position);
                }
                code.is_codeword(&word).then_some((weight, word))
            })
            .collect();
        let best = weights.iter().map(|(w, _)| *w).min().unwrap();

        let (decoded, outcome) = receive_separate(&soft, &code, &config).unwrap();
        let correction = outcome
            .correction
            .expect("an unbounded search always succeeds");
        assert!(code.is_codeword(&decoded));
        assert_eq!(correction.pattern.logistic_weight(), best, "trial {trial}");

        let minimisers: Vec<&BitWord> = weights
            .iter()
            .filter(|(w, _)| *w == best)
            .map(|(_, c)| c)
            .collect();
        if minimisers.len() == 1 {
            unique += 1;
            assert_eq!(&decoded, minimisers[0], "trial {trial}");
        }
    }
    assert!(
        unique > 500,
        "only {unique} receptions had a unique minimiser"
    );
}
