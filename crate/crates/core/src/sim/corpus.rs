use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::policy::validate_roster;
use super::{play_game, GameRecord, SimError, TechPolicy};
use crate::econ::{enumerate_markets, Family, Horizon, MarketConfig, SituationParams};

/// Independent stream for cell `index` of a corpus seeded with `seed`.
pub fn cell_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws the situational variables for one game in `market`.
pub fn draw_situation<R: Rng + ?Sized>(market: &MarketConfig, rng: &mut R) -> SituationParams {
    let m_scale = if rng.random::<bool>() { 1.0 } else { 100.0 };
    let finite_rounds = |rng: &mut R| if rng.random::<bool>() { 4 } else { 10 };
    let mut s = SituationParams {
        delta_a: None,
        delta_b: None,
        m_scale,
        f_a: None,
        f_b: None,
        prior_p: None,
        v_value: None,
        rounds: None,
    };
    match market.family {
        Family::Bargaining | Family::Negotiation => {
            s.delta_a = Some(rng.random_range(0.8..0.99));
            s.delta_b = Some(rng.random_range(0.8..0.99));
            if market.family == Family::Negotiation {
                let f_a = rng.random_range(0.5..1.5);
                s.f_a = Some(f_a);
                s.f_b = Some(rng.random_range(f_a..f_a + 1.0));
            }
            if market.horizon == Some(Horizon::Finite) {
                s.rounds = Some(finite_rounds(rng));
            }
        }
        Family::Persuasion => {
            s.prior_p = Some(rng.random_range(0.3..0.8));
            s.v_value = Some(rng.random_range(1.2..3.0));
            s.rounds = Some(finite_rounds(rng));
        }
    }
    s
}

/// Plays the game fully determined by `seed`: situation draw, then play.
pub fn play_seeded(
    market: &MarketConfig,
    a: &TechPolicy,
    b: &TechPolicy,
    seed: u64,
) -> Result<GameRecord, SimError> {
    let situation = draw_situation(market, &mut ChaCha8Rng::seed_from_u64(seed));
    let mut record = play_game(market, &situation, a, b, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    record.seed = seed;
    Ok(record)
}

/// Every market of every family × every ordered tech pair (self-play
/// included) × `games_per_cell` games. Cells run in parallel on independent
/// streams, so the result does not depend on the thread count.
pub fn generate_corpus(
    roster: &[TechPolicy],
    families: &[Family],
    games_per_cell: usize,
    seed: u64,
) -> Result<Vec<GameRecord>, SimError> {
    validate_roster(roster)?;
    let mut cells = Vec::new();
    for &family in families {
        for market in enumerate_markets(family) {
            for a in roster {
                for b in roster {
                    cells.push((market, a, b));
                }
            }
        }
    }
    let chunks: Result<Vec<Vec<GameRecord>>, SimError> = cells
        .par_iter()
        .enumerate()
        .map(|(index, (market, a, b))| {
            let mut rng = cell_rng(seed, index as u64);
            (0..games_per_cell).map(|_| play_seeded(market, a, b, rng.next_u64())).collect()
        })
        .collect();
    Ok(chunks?.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::generate_roster;

    #[test]
    fn grid_size() {
        let roster = generate_roster(5, 1).unwrap();
        let corpus = generate_corpus(&roster, &[Family::Bargaining], 10, 3).unwrap();
        assert_eq!(corpus.len(), 8 * 25 * 10);
        assert!(generate_corpus(&roster, &[Family::Bargaining], 0, 3).unwrap().is_empty());
    }

    #[test]
    fn deterministic_and_replayable() {
        let roster = generate_roster(3, 2).unwrap();
        let one = generate_corpus(&roster, &Family::ALL, 2, 9).unwrap();
        let two = generate_corpus(&roster, &Family::ALL, 2, 9).unwrap();
        assert_eq!(one, two);
        let r = &one[37];
        let a = roster.iter().find(|p| p.tech_id == r.tech_a).unwrap();
        let b = roster.iter().find(|p| p.tech_id == r.tech_b).unwrap();
        assert_eq!(&play_seeded(&r.market, a, b, r.seed).unwrap(), r);
    }

    #[test]
    fn empty_roster_rejected() {
        assert!(matches!(
            generate_corpus(&[], &[Family::Bargaining], 1, 0),
            Err(SimError::RosterTooSmall(0))
        ));
    }
}
