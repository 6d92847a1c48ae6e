use fibrewise_core::propsolve::{
    build_basic_form, identity_residual, lemma_closed_form, lemma_kernel, same_span, solve_basic_form, BasicForm, BasicFormRejection,
    LemmaCondition, MixedTensor, SubscriptSequence,
};
use fibrewise_core::{Polynomial, Var, Q};
use proptest::prelude::*;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn pool() -> Vec<Var> {
    [1u32, 3, 5, 7, 9].iter().enumerate().map(|(i, &d)| Var::fiber(i as u32, d)).collect()
}

/// Random basic forms of one word length with scalar or `x`-multiple coefficients.
fn form_strategy() -> impl Strategy<Value = (u32, BasicForm)> {
    (3u32..=4).prop_flat_map(|r| {
        let seqs: Vec<SubscriptSequence> =
            subsets(5, r as usize).into_iter().map(|s| SubscriptSequence(s.into_iter().map(|i| pool()[i]).collect())).collect();
        let len = seqs.len();
        proptest::collection::vec((-3i64..=3, 0u32..2), len).prop_map(move |cs| {
            let mut form = BasicForm::new();
            for (seq, (c, e)) in seqs.iter().zip(cs) {
                if c != 0 {
                    let b = Polynomial::product([(Var::base(0, 2), e)].into_iter().filter(|&(_, e)| e > 0)).scale(&q(c));
                    form.insert(seq.clone(), b);
                }
            }
            (r, form)
        })
    })
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == r).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

#[test]
fn closed_forms_match_kernels_on_every_three_letter_sequence() {
    for idx in subsets(5, 3) {
        let seq = SubscriptSequence(idx.into_iter().map(|i| pool()[i]).collect());
        for cond in LemmaCondition::ALL {
            assert!(same_span(&lemma_closed_form(cond, &seq), &lemma_kernel(cond, &seq)), "{cond:?} on {:?}", seq.indices());
        }
    }
}

#[test]
fn word_length_two_is_rejected() {
    let p = pool();
    let chi = Polynomial::product([(p[0], 1), (p[1].in_copy(fibrewise_core::Space::W1), 1)]);
    let chi = MixedTensor::new(chi).unwrap();
    assert_eq!(solve_basic_form(&chi), Err(BasicFormRejection::TooShort(2)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn basic_forms_satisfy_the_identity_and_are_recovered((_r, form) in form_strategy()) {
        let chi = build_basic_form(&form);
        prop_assert!(identity_residual(&chi).is_zero());
        if chi.is_zero() {
            prop_assert!(form.is_empty());
        } else {
            let solved = solve_basic_form(&MixedTensor::new(chi).unwrap()).unwrap();
            prop_assert_eq!(solved, form);
        }
    }

    #[test]
    fn perturbing_a_basic_form_by_a_pure_word_is_rejected((_r, form) in form_strategy(), k in 0usize..5) {
        let p = pool();
        let l = (k + 1) % 5;
        let m = (k + 2) % 5;
        let extra = Polynomial::product([
            (p[k], 1),
            (p[l].in_copy(fibrewise_core::Space::W1), 1),
            (p[m].in_copy(fibrewise_core::Space::W1), 1),
        ]);
        let chi = &build_basic_form(&form) + &extra;
        if let Ok(t) = MixedTensor::new(chi) {
            prop_assert!(solve_basic_form(&t).is_err());
        }
    }
}
