use proptest::prelude::*;
use stacksa_core::eval::{balanced_accuracy, macro_f1, macro_recall, pearson};
use stacksa_core::folds::{fold_indices, stratified_folds, stratified_split};
use stacksa_core::models::emoji::is_emoji;
use stacksa_core::models::{prepare_emoji_corpus, Lexicon};
use stacksa_core::textproc::{tokenize, TextModelConfig, TextPipeline, TokenFamily};

fn words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec("[a-d]{1,4}", 0..12)
}

fn lexicon() -> (Lexicon, TextPipeline) {
    let pipeline = TextPipeline::from_config(TextModelConfig::english()).unwrap();
    let lex = Lexicon::new(["ab", "bad", "cab"], ["dd", "da", "bd"], &pipeline).unwrap();
    (lex, pipeline)
}

proptest! {
    #[test]
    fn token_counts_follow_lengths(w in words(), n in 1usize..4, q in 1usize..5, a in 2usize..4, b in 1usize..3) {
        let text = w.join(" ");
        let config = TextModelConfig { nwords: vec![n], skipgrams: vec![(a, b)], qgrams: vec![q], ..TextModelConfig::english() };
        let bag = tokenize(&text, &config);
        let len = w.len();
        let span = (a - 1) * (b + 1) + 1;
        prop_assert_eq!(bag.texts(TokenFamily::WordNgram).len(), (len + 1).saturating_sub(n));
        prop_assert_eq!(bag.texts(TokenFamily::SkipGram).len(), (len + 1).saturating_sub(span));
        prop_assert_eq!(bag.texts(TokenFamily::QGram).len(), (text.chars().count() + 1).saturating_sub(q));
        prop_assert_eq!(bag.len(), bag.texts(TokenFamily::WordNgram).len() + bag.texts(TokenFamily::SkipGram).len() + bag.texts(TokenFamily::QGram).len());
    }

    #[test]
    fn lexicon_counts_are_additive_and_order_free(x in words(), y in words()) {
        let (lex, pipeline) = lexicon();
        let sx = lex.score(&x.join(" "), &pipeline);
        let sy = lex.score(&y.join(" "), &pipeline);
        let joined = lex.score(&format!("{} {}", x.join(" "), y.join(" ")), &pipeline);
        prop_assert_eq!(joined, [sx[0] + sy[0], sx[1] + sy[1]]);
        let mut rev = x.clone();
        rev.reverse();
        prop_assert_eq!(lex.score(&rev.join(" "), &pipeline), sx);
    }

    #[test]
    fn metrics_are_bounded_and_rename_invariant(pairs in prop::collection::vec((0usize..4, 0usize..4), 1..60), shift in 1usize..4) {
        let names = ["p", "q", "r", "s"];
        let t: Vec<&str> = pairs.iter().map(|p| names[p.0]).collect();
        let p: Vec<&str> = pairs.iter().map(|p| names[p.1]).collect();
        let t2: Vec<&str> = pairs.iter().map(|p| names[(p.0 + shift) % 4]).collect();
        let p2: Vec<&str> = pairs.iter().map(|p| names[(p.1 + shift) % 4]).collect();
        let f1 = macro_f1(&t, &p).unwrap();
        let rec = macro_recall(&t, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&f1) && (0.0..=1.0).contains(&rec));
        prop_assert!((f1 - macro_f1(&t2, &p2).unwrap()).abs() < 1e-12);
        prop_assert!((rec - macro_recall(&t2, &p2).unwrap()).abs() < 1e-12);
        prop_assert_eq!(macro_f1(&t, &t).unwrap(), 1.0);
        // balanced accuracy over present classes equals macro-recall
        let ti: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let pi: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        prop_assert!((balanced_accuracy(&ti, &pi, 4) - rec).abs() < 1e-12);
    }

    #[test]
    fn pearson_is_symmetric_and_affine_invariant(v in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..40), s in 0.1f64..5.0, k in -5.0f64..5.0) {
        let a: Vec<f64> = v.iter().map(|p| p.0).collect();
        let b: Vec<f64> = v.iter().map(|p| p.1).collect();
        if let Ok(r) = pearson(&a, &b) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
            prop_assert!((r - pearson(&b, &a).unwrap()).abs() < 1e-12);
            let scaled: Vec<f64> = a.iter().map(|x| s * x + k).collect();
            prop_assert!((r - pearson(&scaled, &b).unwrap()).abs() < 1e-9);
            let flipped: Vec<f64> = a.iter().map(|x| -x).collect();
            prop_assert!((r + pearson(&flipped, &b).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn folds_partition_and_stratify(labels in prop::collection::vec(0usize..3, 30..120), k in 2usize..6, seed in any::<u64>()) {
        let counts: Vec<usize> = (0..3).map(|c| labels.iter().filter(|&&l| l == c).count()).collect();
        prop_assume!(counts.iter().all(|&n| n == 0 || n >= k));
        let folds = stratified_folds(&labels, 3, k, seed).unwrap();
        prop_assert_eq!(&folds, &stratified_folds(&labels, 3, k, seed).unwrap());
        prop_assert!(folds.iter().all(|&f| f < k));
        for c in 0..3 {
            let per: Vec<usize> = (0..k).map(|f| labels.iter().zip(&folds).filter(|(l, g)| **l == c && **g == f).count()).collect();
            prop_assert!(per.iter().max().unwrap() - per.iter().min().unwrap() <= 1);
        }
        for (train, test) in fold_indices(&folds, k) {
            prop_assert_eq!(train.len() + test.len(), labels.len());
            prop_assert!(test.iter().all(|r| train.binary_search(r).is_err()));
        }
        let (train, valid) = stratified_split(&labels, 3, 0.8, seed);
        prop_assert_eq!(train.len() + valid.len(), labels.len());
    }

    #[test]
    fn emoji_preparation_respects_caps(
        picks in prop::collection::vec((0usize..5, 0usize..3), 0..200),
        cap in 0usize..10,
        classes in 1usize..5,
        seed in any::<u64>(),
    ) {
        let emojis = ["😀", "❤", "🔥", "👍", "😢"];
        let raw: Vec<String> = picks
            .iter()
            .enumerate()
            .map(|(i, &(e, form))| match form {
                0 => format!("text {i} {}", emojis[e]),
                1 => format!("RT text {i} {}", emojis[e]),
                _ => format!("text {i} {} {}", emojis[e], emojis[(e + 1) % 5]),
            })
            .collect();
        let out = prepare_emoji_corpus(&raw, cap, classes, seed);
        prop_assert!(out.class_counts.len() <= classes);
        prop_assert!(out.class_counts.iter().all(|(_, n)| *n <= cap));
        prop_assert_eq!(out.class_counts.iter().map(|c| c.1).sum::<usize>(), out.corpus.len());
        prop_assert!(out.corpus.texts().iter().all(|t| !t.starts_with("RT") && t.chars().all(|c| !is_emoji(c))));
        let eligible = picks.iter().filter(|p| p.1 == 0).count();
        prop_assert!(out.corpus.len() <= eligible);
    }
}
