use std::time::Instant;

use exactprob::qkd::{
    eve_model_file, eve_space_and_prior, intercept_resend_stats, measurement_rule, named_event,
    p_a_sent_one_given_b_measured_one, p_b_measures_one, partition_a, qkd_distribution,
    qkd_model_file, qkd_ops, qkd_space, qkd_tree, EveOutcome,
};
use exactprob::{is_prob_space, make_distribution, powerset_space, Event, Rational};

/// The reference table, in the order and spelling it is usually printed.
const REFERENCE: &str = "
False False False False 1/8
False False False True  0
False False True  False 1/16
False False True  True  1/16
False True  False False 1/16
False True  False True  1/16
False True  True  False 1/8
False True  True  True  0
True  False False False 0
True  False False True  1/8
True  False True  False 1/16
True  False True  True  1/16
True  True  False False 1/16
True  True  False True  1/16
True  True  True  False 0
True  True  True  True  1/8
";

fn reference_rows() -> Vec<([bool; 4], Rational)> {
    REFERENCE
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let b = |s: &str| s == "True";
            ([b(f[0]), b(f[1]), b(f[2]), b(f[3])], f[4].parse().unwrap())
        })
        .collect()
}

#[test]
fn literal_table_matches_reference() {
    let ops = qkd_ops();
    let space = ops.space().clone();
    let rows = reference_rows();
    assert_eq!(rows.len(), 16);
    for (bits, p) in rows {
        let i = space.index_of_assignment(&bits).unwrap();
        assert_eq!(ops.weight(i), &p, "{}", space.label(i));
    }
}

#[test]
fn generated_table_matches_reference() {
    let start = Instant::now();
    let space = qkd_space();
    let generated = qkd_tree().to_prior(&space).unwrap();
    assert_eq!(generated, qkd_ops());
    // also positionally: canonical order is the printed row order
    for (i, (_, p)) in reference_rows().into_iter().enumerate() {
        assert_eq!(generated.weight(i), &p);
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn security_quantities() {
    let total = p_b_measures_one().unwrap();
    assert_eq!(total.terms.len(), 8);
    for term in &total.terms {
        assert_eq!(term.block, Rational::frac(1, 8));
    }
    assert_eq!(total.total, Rational::frac(1, 2));

    let dist = qkd_distribution();
    let space = dist.space().clone();
    let bm_one = named_event(&space, "BmOne", true).unwrap();
    assert_eq!(dist.measure(&bm_one).unwrap(), total.total);

    let report = p_a_sent_one_given_b_measured_one().unwrap();
    assert_eq!(report.p_bm_one, Rational::frac(1, 2));
    assert_eq!(report.joint, Rational::frac(3, 8));
    assert_eq!(report.posterior, Rational::frac(3, 4));
    assert_eq!(report.error, Rational::frac(1, 4));
    assert_eq!(&report.posterior * &report.p_bm_one, report.joint);

    // the joint event is exactly these four outcomes
    let as_one = named_event(&space, "AsOne", true).unwrap();
    let joint = as_one.intersection(&bm_one).unwrap();
    let mut labels = joint.labels();
    labels.sort();
    assert_eq!(labels, ["(T,F,F,T)", "(T,F,T,T)", "(T,T,F,T)", "(T,T,T,T)"]);
}

#[test]
fn first_block_is_all_true() {
    let space = qkd_space();
    let part = partition_a(&space).unwrap();
    let first = &part.blocks()[0];
    let mut labels = first.labels();
    labels.sort();
    assert_eq!(labels, ["(T,T,T,F)", "(T,T,T,T)"]);
    let last = &part.blocks()[7];
    assert!(last.labels().iter().all(|l| l.starts_with("(F,F,F,")));
}

#[test]
fn qkd_powerset_is_a_probability_space() {
    let space = qkd_space();
    let family = powerset_space(&space).unwrap();
    assert_eq!(family.len(), 65536);
    assert!(is_prob_space(&family, &space).unwrap());
    // and the QKD prior measures every one of them within [0, 1]
    let dist = qkd_distribution();
    for e in family.iter().step_by(97) {
        let p = dist.measure(e).unwrap();
        assert!(!p.is_negative() && p <= 1);
    }
}

/// Weights of the 64 intercept-resend outcomes as multiples of 1/64, computed
/// with integers only. Bits are (as_one, ach_x, ech_x, em_one, bch_x, bm_one).
fn eve_oracle() -> Vec<([bool; 6], u32)> {
    // P(result) * 2 for a photon carrying `bit` in basis `sent`, read in `read`
    fn twice(sent: bool, bit: bool, read: bool, result: bool) -> u32 {
        if sent != read {
            1
        } else if result == bit {
            2
        } else {
            0
        }
    }
    let mut out = Vec::new();
    for i in 0..64u32 {
        let b: [bool; 6] = std::array::from_fn(|k| i & (1 << (5 - k)) != 0);
        let [as_one, ach_x, ech_x, em_one, bch_x, bm_one] = b;
        // four fair coins give 1/16; each measurement factor is (twice)/2
        let w = twice(ach_x, as_one, ech_x, em_one) * twice(ech_x, em_one, bch_x, bm_one);
        out.push((b, w));
    }
    out
}

#[test]
fn eve_oracle_is_a_distribution() {
    let total: u32 = eve_oracle().iter().map(|(_, w)| w).sum();
    assert_eq!(total, 64);
}

#[test]
fn eve_stats_match_oracle() {
    let rows = eve_oracle();
    let sum = |pred: &dyn Fn(&[bool; 6]) -> bool| -> u32 {
        rows.iter().filter(|(b, _)| pred(b)).map(|(_, w)| w).sum()
    };
    let sifted = sum(&|b| b[1] == b[4]);
    let sifted_wrong = sum(&|b| b[1] == b[4] && b[5] != b[0]);
    let sifted_eve_right = sum(&|b| b[1] == b[4] && b[3] == b[0]);
    let oracle_sifted = Rational::frac(sifted.into(), 64);
    let oracle_qber = Rational::frac(sifted_wrong.into(), sifted.into());
    let oracle_eve = Rational::frac(sifted_eve_right.into(), sifted.into());

    // the oracle alone pins the expected values
    assert_eq!(oracle_sifted, Rational::frac(1, 2));
    assert_eq!(oracle_qber, Rational::frac(1, 4));
    assert_eq!(oracle_eve, Rational::frac(3, 4));

    let stats = intercept_resend_stats().unwrap();
    assert_eq!(stats.sifted_prob, oracle_sifted);
    assert_eq!(stats.sifted_qber, oracle_qber);
    assert_eq!(stats.eve_correct_given_sift, oracle_eve);
}

#[test]
fn eve_prior_matches_oracle_row_by_row() {
    let (space, prior) = eve_space_and_prior();
    for (bits, w) in eve_oracle() {
        let i = space.index_of_assignment(&bits).unwrap();
        assert_eq!(
            prior.weight(i),
            &Rational::frac(w.into(), 64),
            "{}",
            space.label(i)
        );
        assert_eq!(EveOutcome::from_bits(&bits).bits(), bits);
    }
}

/// When Eve happens to pick Alice's basis she learns the bit and resends it
/// faithfully, so the visible variables behave as if she were absent.
#[test]
fn eve_in_the_right_basis_is_invisible() {
    let (space, prior) = eve_space_and_prior();
    let dist = make_distribution(prior).unwrap();
    let guessed = Event::where_assignment(&space, |b| b[2] == b[1]).unwrap();
    let p_guessed = dist.measure(&guessed).unwrap();
    assert_eq!(p_guessed, Rational::frac(1, 2));
    let honest = qkd_ops();
    let qspace = honest.space().clone();
    for q in 0..16 {
        let v = qspace.assignment(q).unwrap();
        let visible = Event::where_assignment(&space, |b| {
            b[2] == b[1] && [b[0], b[1], b[4], b[5]] == v[..]
        })
        .unwrap();
        let restricted = dist.cond_prob(&visible, &guessed).unwrap();
        assert_eq!(&restricted, honest.weight(q), "{}", qspace.label(q));
    }
}

#[test]
fn flipping_every_bit_value_preserves_both_priors() {
    let honest = qkd_ops();
    let space = honest.space().clone();
    for i in 0..16 {
        let mut b = space.assignment(i).unwrap();
        b[0] = !b[0];
        b[3] = !b[3];
        let j = space.index_of_assignment(&b).unwrap();
        assert_eq!(honest.weight(i), honest.weight(j));
    }
    let (space, prior) = eve_space_and_prior();
    for i in 0..64 {
        let mut b = space.assignment(i).unwrap();
        for k in [0, 3, 5] {
            b[k] = !b[k];
        }
        let j = space.index_of_assignment(&b).unwrap();
        assert_eq!(prior.weight(i), prior.weight(j));
    }
}

#[test]
fn measurement_rule_is_a_distribution() {
    for enc in [false, true] {
        for bit in [false, true] {
            for meas in [false, true] {
                let (one, zero) = measurement_rule(enc, bit, meas);
                assert_eq!(one + zero, Rational::one());
            }
        }
    }
}

#[test]
fn bundled_models_compile_to_the_same_priors() {
    use exactprob::dsl::CompiledModel;
    let q = CompiledModel::new(&qkd_model_file()).unwrap();
    assert_eq!(q.distribution().prior().weights(), qkd_ops().weights());
    let e = CompiledModel::new(&eve_model_file()).unwrap();
    assert_eq!(
        e.distribution().prior().weights(),
        eve_space_and_prior().1.weights()
    );
}
