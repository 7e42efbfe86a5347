use qsdc_core::comms::{
    eavesdrop_check, encode_symbol, CheckVerdict, DecodeTable, Message, Mode, Session, SessionConfig, Status,
    SymbolLayout,
};
use qsdc_core::qcore::{GhzOutcome, PauliOp, Sign};
use qsdc_core::Error;

use PauliOp::{I, X, Y, Z};
use Sign::{Minus, Plus};

fn bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

fn table(n: usize, mode: Mode) -> DecodeTable {
    DecodeTable::generate(&SymbolLayout::for_users(n).unwrap(), mode).unwrap()
}

fn quiet(n_users: usize, mode: Mode) -> SessionConfig {
    SessionConfig { n_users, mode, auth_rounds: 8, check_fraction: 0.0, ..SessionConfig::default() }
}

/// Branch-tracking oracle: the encoded state is `a₀|x⟩ + a₁|x̄⟩` over
/// `(server, u₁…u_N)`; expanding the publisher in the X basis gives the
/// GHZ pattern and relative sign seen for each publication.
fn oracle(n: usize, mode: Mode, ops: &[PauliOp], publication: Sign) -> GhzOutcome {
    let mut x = vec![false; n + 1];
    let (mut a0, mut a1) = (1i32, 1i32);
    for (k, op) in ops.iter().enumerate() {
        let q = k + 1;
        match op {
            I => {}
            X => x[q] = !x[q],
            Z => a1 = -a1,
            Y => {
                x[q] = !x[q];
                a0 = -a0;
            }
        }
    }
    let receiver = n;
    let (measured, p): (Vec<usize>, usize) = match mode {
        Mode::Partial => ((1..n).chain([receiver]).collect(), 0),
        Mode::Full => ((1..n).chain([0]).collect(), receiver),
    };
    let m: Vec<bool> = measured.iter().map(|&q| x[q]).collect();
    let s = publication == Minus;
    let phase = |bit: bool| if s && bit { -1 } else { 1 };
    let c_m = a0 * phase(x[p]);
    let c_mbar = a1 * phase(!x[p]);
    let (pattern_bits, c0, c1) = if m[0] { (m.iter().map(|b| !b).collect(), c_mbar, c_m) } else { (m, c_m, c_mbar) };
    let pattern = pattern_bits.iter().fold(0u32, |acc, &b| acc << 1 | u32::from(b));
    GhzOutcome::new(n, pattern, Sign::from_bit(c0 != c1)).unwrap()
}

#[test]
fn encode_examples() {
    let two = SymbolLayout::for_users(2).unwrap();
    let three = SymbolLayout::for_users(3).unwrap();
    assert_eq!(encode_symbol(&two, &bits("10")).unwrap(), vec![Y]);
    assert_eq!(encode_symbol(&three, &bits("101")).unwrap(), vec![Y, X]);
    assert_eq!(encode_symbol(&three, &bits("000")).unwrap(), vec![I, I]);
    assert_eq!(
        encode_symbol(&three, &bits("10")),
        Err(Error::SymbolWidth { expected: 3, got: 2 })
    );
}

#[test]
fn layout_width_equals_user_count() {
    for n in 2..=8 {
        assert_eq!(SymbolLayout::for_users(n).unwrap().width(), n);
    }
    assert_eq!(SymbolLayout::for_users(1), Err(Error::TooFewUsers(1)));
}

#[test]
fn two_bits_per_sender_framing_collides_from_four_users() {
    // u₁…u_{N−2} at two bits each plus one bit for the last sender
    for n in 2..=6usize {
        let mut widths = vec![2u8; n.saturating_sub(2)];
        widths.push(1);
        if n == 2 {
            widths = vec![2];
        }
        let layout = SymbolLayout::new(widths).unwrap();
        let r = DecodeTable::generate(&layout, Mode::Partial);
        if n <= 3 {
            assert!(r.is_ok(), "n = {n}");
        } else {
            assert_eq!(r.err(), Some(Error::AmbiguousFraming), "n = {n}");
        }
    }
}

#[test]
fn generated_tables_match_branch_oracle() {
    for n in 2..=6 {
        for mode in [Mode::Partial, Mode::Full] {
            let t = table(n, mode);
            let layout = t.layout().clone();
            assert_eq!(t.rows().len(), 2 << n);
            for s in 0..1u32 << n {
                let ops = encode_symbol(&layout, &layout.bits_of(s)).unwrap();
                for publication in [Plus, Minus] {
                    let o = oracle(n, mode, &ops, publication);
                    assert_eq!(t.decode(o, publication), Some(s), "n={n} {mode:?} s={s}");
                }
            }
        }
    }
}

fn bell(name: &str, sign: Sign) -> GhzOutcome {
    GhzOutcome::from_glyph(2, name, sign).unwrap()
}

fn ghz3(name: &str, sign: Sign) -> GhzOutcome {
    GhzOutcome::from_glyph(3, name, sign).unwrap()
}

#[test]
fn two_party_partial_table_rows() {
    let t = table(2, Mode::Partial);
    let rows = [
        (Plus, bell("Phi", Plus), "00"),
        (Plus, bell("psi", Plus), "01"),
        (Plus, bell("psi", Minus), "10"),
        (Plus, bell("Phi", Minus), "11"),
        (Minus, bell("Phi", Minus), "00"),
        (Minus, bell("psi", Minus), "01"),
        (Minus, bell("psi", Plus), "10"),
        (Minus, bell("Phi", Plus), "11"),
    ];
    for (publication, o, sent) in rows {
        let s = t.decode(o, publication).unwrap();
        assert_eq!(t.layout().bits_of(s), bits(sent), "{publication} {o}");
    }
}

#[test]
fn three_party_partial_table_rows() {
    let t = table(3, Mode::Partial);
    let names = ["Psi", "phi", "psi", "varphi", "psi", "varphi", "Psi", "phi"];
    let plus_signs = [Plus, Plus, Plus, Plus, Minus, Minus, Minus, Minus];
    for (value, (&name, &sign)) in names.iter().zip(&plus_signs).enumerate() {
        for publication in [Plus, Minus] {
            let sign = if publication == Plus { sign } else { sign.flipped() };
            let s = t.decode(ghz3(name, sign), publication).unwrap();
            assert_eq!(s, value as u32, "{publication} {name}{sign}");
        }
    }
}

#[test]
fn decode_examples() {
    let t2 = table(2, Mode::Partial);
    assert_eq!(t2.decode(bell("psi", Minus), Minus), Some(0b01));
    let t3 = table(3, Mode::Partial);
    assert_eq!(t3.decode(ghz3("varphi", Plus), Minus), Some(0b101));
    let f2 = table(2, Mode::Full);
    assert_eq!(f2.decode(bell("psi", Minus), Plus), Some(0b10));
}

#[test]
fn flipping_the_publication_flips_the_sign() {
    for n in 2..=4 {
        let t = table(n, Mode::Partial);
        for o in GhzOutcome::all(n) {
            let flipped = GhzOutcome::new(n, o.pattern(), o.sign().flipped()).unwrap();
            assert_eq!(t.decode(o, Plus), t.decode(flipped, Minus));
        }
    }
}

#[test]
fn full_mode_mirrors_partial_mode() {
    for n in 2..=4 {
        let p = table(n, Mode::Partial);
        let f = table(n, Mode::Full);
        for o in GhzOutcome::all(n) {
            for publication in [Plus, Minus] {
                assert_eq!(p.decode(o, publication), f.decode(o, publication));
            }
        }
    }
}

#[test]
fn message_parsing_and_framing() {
    assert_eq!(Message::parse("100111").unwrap().bits(), bits("100111").as_slice());
    assert_eq!(Message::parse("0xA5").unwrap().bits(), bits("10100101").as_slice());
    assert!(Message::parse("10a").is_err());
    assert!(Message::parse("").is_err());
    let layout = SymbolLayout::for_users(3).unwrap();
    let (symbols, pad) = Message::parse("10110").unwrap().frame(&layout);
    assert_eq!((symbols, pad), (vec![0b101, 0b100], 1));
}

fn worked_example(mode: Mode) -> (Session, qsdc_core::comms::Transmission) {
    let msg = Message::parse("100111").unwrap();
    for seed in 0..10_000u64 {
        let mut s = Session::new(quiet(2, mode), seed).unwrap();
        s.authenticate().unwrap();
        let tx = s.transmit(&msg).unwrap();
        let pubs: Vec<Sign> = tx.slots.iter().map(|r| r.publication).collect();
        if pubs == [Plus, Plus, Minus] {
            return (s, tx);
        }
    }
    panic!("no seed produced the publication sequence");
}

#[test]
fn worked_example_both_modes() {
    for mode in [Mode::Partial, Mode::Full] {
        let (_, tx) = worked_example(mode);
        let ops: Vec<PauliOp> = tx.slots.iter().map(|r| r.ops[0]).collect();
        let outcomes: Vec<GhzOutcome> = tx.slots.iter().map(|r| r.outcome).collect();
        assert_eq!(ops, [Y, X, Z]);
        assert_eq!(outcomes, [bell("psi", Minus), bell("psi", Plus), bell("Phi", Plus)]);
        assert_eq!(tx.decoded_bits(), bits("100111"));
    }
}

#[test]
fn round_trip_small_exhaustive() {
    for mode in [Mode::Partial, Mode::Full] {
        for n in [2usize, 3] {
            for s in 0..1u32 << n {
                let msg = Message::from_bits(SymbolLayout::for_users(n).unwrap().bits_of(s));
                for seed in 0..5 {
                    let mut session = Session::new(quiet(n, mode), seed).unwrap();
                    let report = session.run(&msg).unwrap();
                    assert_eq!(report.status, Status::Delivered);
                    assert_eq!(report.transmission.unwrap().decoded_bits(), msg.bits());
                }
            }
        }
    }
}

#[test]
fn transcript_replays_bit_for_bit() {
    let cfg = SessionConfig { n_users: 3, ..SessionConfig::default() };
    let msg = Message::parse("0xBEEF").unwrap();
    let run = |seed| {
        let mut s = Session::new(cfg.clone(), seed).unwrap();
        s.run(&msg).unwrap();
        s.transcript().clone()
    };
    assert_eq!(run(11), run(11));
    assert_ne!(run(11), run(12));
    let t = run(11);
    assert_eq!(t.header().unwrap().pad_len, 2);
    assert!(t.events().windows(2).all(|w| w[1].seq == w[0].seq + 1));
    assert_eq!(t.final_bits()[0].1, "1011111011101111");
}

#[test]
fn check_symbols_pass_without_attacker() {
    let cfg = SessionConfig { check_fraction: 0.5, ..SessionConfig::default() };
    let mut s = Session::new(cfg, 3).unwrap();
    let report = s.run(&Message::parse("101101").unwrap()).unwrap();
    let check = report.check.unwrap();
    assert_eq!(check.checked, 3);
    assert_eq!(check.errors, 0);
    assert_eq!(check.verdict, CheckVerdict::Pass);
    assert_eq!(eavesdrop_check(&report.transmission.unwrap(), 1.0).verdict, CheckVerdict::Pass);
}

#[test]
fn epr_stock_runs_out() {
    let cfg = SessionConfig { auth_rounds: 2, check_fraction: 0.0, ..SessionConfig::default() };
    let mut s = Session::new(cfg, 1).unwrap();
    s.authenticate().unwrap();
    let r = s.transmit(&Message::parse("101010").unwrap());
    assert!(matches!(r, Err(Error::EprExhausted(_))));
}

#[test]
fn config_validation() {
    let bad = SessionConfig { n_users: 1, ..SessionConfig::default() };
    assert!(matches!(Session::new(bad, 0), Err(Error::TooFewUsers(1))));
    let bad = SessionConfig { threshold: 1.5, ..SessionConfig::default() };
    assert!(Session::new(bad, 0).is_err());
}
