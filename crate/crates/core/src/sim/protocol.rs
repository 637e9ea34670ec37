use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GameRecord, TechPolicy};
use crate::econ::{
    BargainingOutcome, EconError, Family, Horizon, MarketConfig, NegotiationOutcome, Outcome,
    PersuasionOutcome, SituationParams,
};

/// Probability an infinite-horizon game survives to the next round.
pub const CONTINUATION_PROB: f64 = 0.9;
/// Hard cap on infinite-horizon rounds; reaching it means no deal.
pub const INFINITE_ROUND_CAP: u32 = 50;
const DEFAULT_FINITE_ROUNDS: u32 = 10;

/// Plays one game between `a` (Alice) and `b` (Bob) with an RNG seeded from
/// `seed`, which is stored on the record so the game can be replayed.
pub fn play_game(
    market: &MarketConfig,
    situation: &SituationParams,
    a: &TechPolicy,
    b: &TechPolicy,
    seed: u64,
) -> Result<GameRecord, EconError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match market.family {
        Family::Bargaining => Outcome::Bargaining(bargaining(market, situation, a, b, &mut rng)?),
        Family::Negotiation => Outcome::Negotiation(negotiation(market, situation, a, b, &mut rng)?),
        Family::Persuasion => Outcome::Persuasion(persuasion(market, situation, a, b, &mut rng)?),
    };
    GameRecord::new(*market, *situation, a.tech_id.clone(), b.tech_id.clone(), outcome, seed)
}

fn round_cap(market: &MarketConfig, situation: &SituationParams) -> u32 {
    match market.horizon {
        Some(Horizon::Infinite) => INFINITE_ROUND_CAP,
        _ => situation.rounds.unwrap_or(DEFAULT_FINITE_ROUNDS),
    }
}

/// True when the game stops before round `t` (t ≥ 2).
fn terminated<R: Rng>(market: &MarketConfig, rng: &mut R) -> bool {
    market.horizon == Some(Horizon::Infinite) && rng.random::<f64>() >= CONTINUATION_PROB
}

fn bargaining<R: Rng>(
    market: &MarketConfig,
    s: &SituationParams,
    a: &TechPolicy,
    b: &TechPolicy,
    rng: &mut R,
) -> Result<BargainingOutcome, EconError> {
    let (delta_a, delta_b) = (s.delta_a()?, s.delta_b()?);
    for t in 1..=round_cap(market, s) {
        if t > 1 && terminated(market, rng) {
            break;
        }
        let alice_proposes = t % 2 == 1;
        let (prop, resp, d_prop, d_resp) = if alice_proposes {
            (&a.bargaining, &b.bargaining, delta_a, delta_b)
        } else {
            (&b.bargaining, &a.bargaining, delta_b, delta_a)
        };
        let k = f64::from((t - 1) / 2);
        let mut demand = prop.initial_demand - prop.concession_rate * k;
        if market.complete_info {
            // knowing the responder's patience, pull towards the stationary split
            let stationary = (1.0 - d_resp) / (1.0 - d_prop * d_resp);
            demand = 0.5 * (demand + stationary);
        }
        let demand = demand.clamp(0.0, 1.0);

        let mut threshold = resp.accept_threshold * d_resp.powi(t as i32 - 1);
        if market.messages_allowed {
            threshold -= 0.03;
        }
        threshold += rng.random_range(-0.05..0.05);
        if 1.0 - demand >= threshold {
            let share = if alice_proposes { demand } else { 1.0 - demand };
            return Ok(BargainingOutcome::Agreement { round: t, share });
        }
    }
    Ok(BargainingOutcome::NoAgreement)
}

fn negotiation<R: Rng>(
    market: &MarketConfig,
    s: &SituationParams,
    a: &TechPolicy,
    b: &TechPolicy,
    rng: &mut R,
) -> Result<NegotiationOutcome, EconError> {
    let (v_a, v_b) = s.valuations()?;
    let (seller, buyer) = (&a.negotiation, &b.negotiation);
    let talk = if market.messages_allowed { 0.03 } else { 0.0 };
    for t in 1..=round_cap(market, s) {
        if t > 1 && terminated(market, rng) {
            break;
        }
        let k = f64::from((t - 1) / 2);
        let noise = 1.0 + rng.random_range(-0.02..0.02);
        if t % 2 == 1 {
            let mut ask = v_a * (1.0 + (seller.markup - seller.concession_rate * k).max(0.0));
            if market.complete_info && ask > v_b {
                ask = v_a.max(0.5 * (ask + v_b));
            }
            if ask <= v_b * (1.0 + buyer.reservation_slack + talk) * noise {
                return Ok(NegotiationOutcome::Trade { price: ask });
            }
        } else {
            let cut = (buyer.markup - buyer.concession_rate * k).clamp(0.0, 0.9);
            let mut bid = v_b * (1.0 - cut);
            if market.complete_info && bid < v_a {
                bid = v_b.min(0.5 * (bid + v_a));
            }
            if bid >= v_a * (1.0 - seller.reservation_slack - talk) * noise {
                return Ok(NegotiationOutcome::Trade { price: bid });
            }
        }
    }
    Ok(NegotiationOutcome::NoTrade)
}

fn persuasion<R: Rng>(
    market: &MarketConfig,
    s: &SituationParams,
    a: &TechPolicy,
    b: &TechPolicy,
    rng: &mut R,
) -> Result<PersuasionOutcome, EconError> {
    let prior = s.prior_p.ok_or(EconError::MissingParameter("prior_p"))?;
    let rounds = s.rounds.ok_or(EconError::MissingParameter("rounds"))?;
    let myopic = market.myopic_buyer.unwrap_or(true);
    let (seller, buyer) = (&a.persuasion, &b.persuasion);
    // a seller facing a long-lived buyer has a reputation to protect
    let lie_prob = (1.0 - seller.honesty_prob) * if myopic { 1.0 } else { 0.6 };
    let nudge = if market.messages_allowed { 0.05 } else { 0.0 };

    let mut out = PersuasionOutcome { rounds, high: 0, bought_high: 0, rejected_low: 0 };
    let (mut lies, mut lows) = (0u32, 0u32);
    for _ in 0..rounds {
        let high = rng.random::<f64>() < prior;
        let says_high = high || rng.random::<f64>() < lie_prob;
        let believed_lie = if market.complete_info {
            lie_prob
        } else if myopic {
            0.5
        } else {
            (f64::from(lies) + 1.0) / (f64::from(lows) + 2.0)
        };
        let buys = says_high && {
            let denom = prior + (1.0 - prior) * believed_lie;
            let posterior = if denom > 0.0 { prior / denom } else { 1.0 };
            (posterior + nudge).min(1.0) >= buyer.trust_threshold
        };
        if high {
            out.high += 1;
            if buys {
                out.bought_high += 1;
            }
        } else {
            lows += 1;
            if says_high {
                lies += 1;
            }
            if !buys {
                out.rejected_low += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::Family;
    use crate::sim::policy::generate_roster;

    fn bargaining_params() -> SituationParams {
        SituationParams {
            delta_a: Some(0.9),
            delta_b: Some(0.9),
            m_scale: 1.0,
            f_a: None,
            f_b: None,
            prior_p: None,
            v_value: None,
            rounds: Some(4),
        }
    }

    #[test]
    fn immediate_equal_split() {
        let mut roster = generate_roster(2, 1).unwrap();
        for p in &mut roster {
            p.bargaining.accept_threshold = 0.0;
        }
        roster[0].bargaining.initial_demand = 0.5;
        let market = Family::Bargaining.market(1).unwrap();
        let rec = play_game(&market, &bargaining_params(), &roster[0], &roster[1], 3).unwrap();
        assert_eq!(
            rec.outcome,
            Outcome::Bargaining(BargainingOutcome::Agreement { round: 1, share: 0.5 })
        );
        assert_eq!(rec.fairness, 1.0);
    }

    #[test]
    fn no_overlap_means_no_trade() {
        let mut roster = generate_roster(2, 2).unwrap();
        for p in &mut roster {
            p.negotiation.reservation_slack = 0.0;
        }
        let params = SituationParams {
            f_a: Some(2.0),
            f_b: Some(1.0),
            ..bargaining_params()
        };
        for market in crate::econ::enumerate_markets(Family::Negotiation) {
            for seed in 0..20 {
                let rec = play_game(&market, &params, &roster[0], &roster[1], seed).unwrap();
                assert_eq!(rec.outcome, Outcome::Negotiation(NegotiationOutcome::NoTrade));
                assert_eq!((rec.payoff_a, rec.payoff_b), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn replay_is_identical() {
        let roster = generate_roster(2, 42).unwrap();
        let market = Family::Bargaining.market(2).unwrap();
        let one = play_game(&market, &bargaining_params(), &roster[0], &roster[1], 42).unwrap();
        let two = play_game(&market, &bargaining_params(), &roster[0], &roster[1], 42).unwrap();
        assert_eq!(serde_json::to_vec(&one).unwrap(), serde_json::to_vec(&two).unwrap());
    }

    #[test]
    fn infinite_games_stop_at_cap() {
        let mut roster = generate_roster(2, 5).unwrap();
        for p in &mut roster {
            p.bargaining.accept_threshold = 1.0;
            p.bargaining.initial_demand = 1.0;
            p.bargaining.concession_rate = 0.0;
        }
        let market = Family::Bargaining.market(2).unwrap();
        let params = SituationParams { delta_a: Some(0.99), delta_b: Some(0.99), ..bargaining_params() };
        for seed in 0..50 {
            let rec = play_game(&market, &params, &roster[0], &roster[1], seed).unwrap();
            assert_eq!(rec.outcome, Outcome::Bargaining(BargainingOutcome::NoAgreement));
        }
    }

    #[test]
    fn persuasion_length_matches_rounds() {
        let roster = generate_roster(2, 9).unwrap();
        let params = SituationParams {
            prior_p: Some(0.5),
            v_value: Some(2.0),
            rounds: Some(10),
            ..bargaining_params()
        };
        for market in crate::econ::enumerate_markets(Family::Persuasion) {
            let rec = play_game(&market, &params, &roster[0], &roster[1], 11).unwrap();
            match rec.outcome {
                Outcome::Persuasion(p) => assert_eq!(p.rounds, 10),
                _ => panic!("wrong family"),
            }
        }
    }
}
