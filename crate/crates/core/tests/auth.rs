use qsdc_core::adversary::{tap_detection, AttackModel, MasqueradeParams};
use qsdc_core::auth::{authenticate_user, run_auth_round, AuthKey, RoundOutcome, Verdict};
use qsdc_core::comms::{Channel, Runtime, Transcript};
use qsdc_core::qcore::{BellOutcome, PartyId, StateRegister};
use qsdc_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const USER: PartyId = PartyId::User(1);
const KEYS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn rt(seed: u64) -> Runtime<ChaCha8Rng> {
    Runtime::with_transcript(ChaCha8Rng::seed_from_u64(seed), Transcript::muted())
}

fn three_sigma(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt() + 1e-12
}

#[test]
fn honest_rounds_always_accept_and_restore_the_pair() {
    let mut rt = rt(1);
    let mut ch = Channel::quantum(PartyId::Server, USER);
    for seed_round in 0..50 {
        for key in KEYS {
            let (round, pair) = run_auth_round(USER, seed_round, key, &mut ch, &mut rt).unwrap();
            assert_eq!(round.outcome, RoundOutcome::Accept);
            assert_eq!(round.measured_value, Some(key.0 ^ key.1));
            let pair = pair.unwrap();
            assert_eq!(pair.reg.len(), 2);
            let phi = StateRegister::bell([pair.server, pair.user], BellOutcome::PhiPlus).unwrap();
            assert!((pair.reg.fidelity(&phi).unwrap() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn sixty_four_honest_rounds_authenticate() {
    let mut rt = rt(2);
    let mut ch = Channel::quantum(PartyId::Server, USER);
    let mut key = AuthKey::random(64, &mut rt.rng);
    let r = authenticate_user(USER, &mut key, 64, 0.0, &mut ch, &mut rt).unwrap();
    assert_eq!(r.verdict, Verdict::Authenticated);
    assert_eq!(r.error_rate, 0.0);
    assert_eq!(r.pairs.len(), 64);
    assert_eq!(key.pairs_remaining(), 0);
}

#[test]
fn key_faults() {
    assert_eq!(AuthKey::new(vec![true; 3]), Err(Error::OddKeyLength(3)));
    let mut key = AuthKey::new(vec![true, false]).unwrap();
    assert_eq!(key.next_pair(), Ok((true, false)));
    assert_eq!(key.next_pair(), Err(Error::KeyExhausted(1)));

    let mut rt = rt(3);
    let mut ch = Channel::quantum(PartyId::Server, USER);
    let mut key = AuthKey::random(2, &mut rt.rng);
    let r = authenticate_user(USER, &mut key, 3, 0.0, &mut ch, &mut rt);
    assert!(matches!(r, Err(Error::KeyExhausted(2))));
}

#[test]
fn closed_or_foreign_channel_is_a_fault() {
    let mut rt = rt(4);
    let mut ch = Channel::quantum(PartyId::Server, USER);
    ch.close();
    let r = run_auth_round(USER, 0, (false, false), &mut ch, &mut rt);
    assert_eq!(r.unwrap_err(), Error::ChannelClosed(PartyId::Server, USER));
    let mut other = Channel::quantum(PartyId::Server, PartyId::User(2));
    assert!(run_auth_round(USER, 0, (false, false), &mut other, &mut rt).is_err());
}

#[test]
fn masquerade_rejection_on_key_zero_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = MasqueradeParams::random(&mut rng);
    let want = params.detection_01();
    let mut ch = Channel::quantum(PartyId::Server, USER).with_tap(AttackModel::masquerade(params));
    let mut rt = rt(6);
    let n = 20_000;
    let rejected = (0..n)
        .filter(|&i| run_auth_round(USER, i, (false, true), &mut ch, &mut rt).unwrap().0.outcome == RoundOutcome::Reject)
        .count();
    let f = rejected as f64 / n as f64;
    assert!((f - want).abs() <= three_sigma(want, n), "{f} vs {want}");
}

#[test]
fn masquerade_is_caught_half_the_time_and_terminated() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = MasqueradeParams::random(&mut rng);
    assert!((params.total() - 0.5).abs() < 1e-12);
    let mut ch = Channel::quantum(PartyId::Server, USER).with_tap(AttackModel::masquerade(params));
    let mut rt = rt(8);
    let n = 10_000;
    let mut key = AuthKey::random(n, &mut rt.rng);
    let r = authenticate_user(USER, &mut key, n, 0.05, &mut ch, &mut rt).unwrap();
    assert!((r.error_rate - 0.5).abs() <= three_sigma(0.5, n), "{}", r.error_rate);
    assert_eq!(r.verdict, Verdict::Terminated);
    assert!(r.pairs.is_empty());
    assert!(!ch.is_open());
}

#[test]
fn deterministic_masquerades_are_exact() {
    for (params, expect) in [
        (MasqueradeParams::identity_like(), [0.0, 1.0, 0.5, 0.5]),
        (MasqueradeParams::swap_like(), [0.0, 1.0, 0.5, 0.5]),
    ] {
        for (key, want) in KEYS.into_iter().zip(expect) {
            assert!((params.detection(key) - want).abs() < 1e-12);
        }
        let mut ch = Channel::quantum(PartyId::Server, USER).with_tap(AttackModel::masquerade(params.clone()));
        let mut rt = rt(9);
        for key in [(false, false), (false, true)] {
            for i in 0..50 {
                let (round, pair) = run_auth_round(USER, i, key, &mut ch, &mut rt).unwrap();
                assert!(pair.is_none());
                let rejected = round.outcome == RoundOutcome::Reject;
                assert_eq!(rejected, params.detection(key) == 1.0);
            }
        }
    }
}

#[test]
fn one_way_reading_goes_unnoticed() {
    let mut ch = Channel::quantum(PartyId::Server, USER).with_tap(AttackModel::one_way());
    let mut rt = rt(10);
    let mut ones = 0;
    let n = 4000;
    for i in 0..n {
        let key = KEYS[rt.rng.gen_range(0..4)];
        let (round, _) = run_auth_round(USER, i, key, &mut ch, &mut rt).unwrap();
        assert_eq!(round.outcome, RoundOutcome::Accept);
    }
    if let Some(AttackModel::OneWay(t)) = ch.tap() {
        ones += t.observations().iter().filter(|&&b| b).count();
        assert_eq!(t.observations().len(), n);
    }
    let f = ones as f64 / n as f64;
    assert!((f - 0.5).abs() <= three_sigma(0.5, n));
}

#[test]
fn two_way_tap_detection_per_key() {
    let theta = 1.1;
    let mut ch = Channel::quantum(PartyId::Server, USER).with_tap(AttackModel::two_way(theta).unwrap());
    let mut rt = rt(11);
    let n = 8000;
    for key in KEYS {
        let want = tap_detection(theta, key).unwrap();
        let rejected = (0..n)
            .filter(|&i| run_auth_round(USER, i, key, &mut ch, &mut rt).unwrap().0.outcome == RoundOutcome::Reject)
            .count();
        let f = rejected as f64 / n as f64;
        assert!((f - want).abs() <= three_sigma(want, n), "{key:?}: {f} vs {want}");
    }
}

#[test]
fn identity_taps_leave_rounds_untouched() {
    for tap in [AttackModel::two_way(0.0).unwrap(), AttackModel::one_way()] {
        let mut ch = Channel::quantum(PartyId::Server, USER).with_tap(tap);
        let mut rt = rt(12);
        for i in 0..100 {
            let key = KEYS[i % 4];
            let (round, _) = run_auth_round(USER, i, key, &mut ch, &mut rt).unwrap();
            assert_eq!(round.outcome, RoundOutcome::Accept);
        }
    }
}
