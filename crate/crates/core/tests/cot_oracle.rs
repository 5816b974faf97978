//! Chain-of-thought traces checked by an independent evaluator.

use simvec_core::chart::{gen_corpus, render_chart, synth_spec_constrained, synth_table, ChartType, DataTable, Mix, ValueMode};
use simvec_core::qa::{
    extract_final_answer, gen_extreme, gen_qa_suite, Answer, AnswerForm, Extracted, Extreme, QaItem, Scope,
    TaskKind,
};

/// Shunting-yard to RPN, then stack evaluation. Handles `max`/`min` with
/// any arity, unary minus, and the typographic operators.
fn evaluate(expr: &str) -> f64 {
    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(f64),
        Op(char),
        Func(String),
        LParen,
        RParen,
        Comma,
    }
    let mut toks = Vec::new();
    let cs: Vec<char> = expr.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_ascii_digit() || c == '.' {
            let s: String = cs[i..].iter().take_while(|c| c.is_ascii_digit() || **c == '.').collect();
            i += s.len();
            toks.push(Tok::Num(s.parse().unwrap()));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let s: String = cs[i..].iter().take_while(|c| c.is_ascii_alphabetic()).collect();
            i += s.len();
            toks.push(Tok::Func(s));
            continue;
        }
        i += 1;
        match c {
            ' ' => {}
            '(' => toks.push(Tok::LParen),
            ')' => toks.push(Tok::RParen),
            ',' => toks.push(Tok::Comma),
            '+' => toks.push(Tok::Op('+')),
            '-' | '−' => {
                let unary = matches!(toks.last(), None | Some(Tok::Op(_) | Tok::LParen | Tok::Comma));
                toks.push(Tok::Op(if unary { '~' } else { '-' }));
            }
            '*' | '×' => toks.push(Tok::Op('*')),
            '/' | '÷' => toks.push(Tok::Op('/')),
            other => panic!("unexpected {other:?} in {expr}"),
        }
    }
    let prec = |op: char| match op {
        '+' | '-' => 1,
        '*' | '/' => 2,
        _ => 3,
    };
    #[derive(Debug)]
    enum Out {
        Num(f64),
        Op(char),
        Call(String, usize),
    }
    let mut out = Vec::new();
    let mut ops: Vec<Tok> = Vec::new();
    let mut arity: Vec<usize> = Vec::new();
    for t in toks {
        match t {
            Tok::Num(v) => out.push(Out::Num(v)),
            Tok::Func(_) => ops.push(t),
            Tok::Op(o) => {
                while let Some(Tok::Op(top)) = ops.last() {
                    let top = *top;
                    if o != '~' && prec(top) >= prec(o) {
                        out.push(Out::Op(top));
                        ops.pop();
                    } else {
                        break;
                    }
                }
                ops.push(Tok::Op(o));
            }
            Tok::LParen => {
                if matches!(ops.last(), Some(Tok::Func(_))) {
                    arity.push(1);
                }
                ops.push(Tok::LParen);
            }
            Tok::Comma => {
                while let Some(Tok::Op(o)) = ops.last() {
                    out.push(Out::Op(*o));
                    ops.pop();
                }
                *arity.last_mut().unwrap() += 1;
            }
            Tok::RParen => {
                while let Some(Tok::Op(o)) = ops.last() {
                    out.push(Out::Op(*o));
                    ops.pop();
                }
                assert_eq!(ops.pop(), Some(Tok::LParen));
                if let Some(Tok::Func(name)) = ops.last().cloned() {
                    ops.pop();
                    out.push(Out::Call(name, arity.pop().unwrap()));
                }
            }
        }
    }
    while let Some(Tok::Op(o)) = ops.pop() {
        out.push(Out::Op(o));
    }
    let mut st: Vec<f64> = Vec::new();
    for o in out {
        match o {
            Out::Num(v) => st.push(v),
            Out::Op('~') => {
                let v = st.pop().unwrap();
                st.push(-v);
            }
            Out::Op(op) => {
                let b = st.pop().unwrap();
                let a = st.pop().unwrap();
                st.push(match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    _ => a / b,
                });
            }
            Out::Call(name, n) => {
                let args = st.split_off(st.len() - n);
                let f = if name == "max" { f64::max } else { f64::min };
                st.push(args.into_iter().reduce(f).unwrap());
            }
        }
    }
    assert_eq!(st.len(), 1, "{expr}");
    st[0]
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn first_number(s: &str) -> f64 {
    let t: String = s
        .chars()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(|c| c.is_ascii_digit() || *c == '.')
        .collect();
    t.parse().unwrap()
}

fn check_item(item: &QaItem, pixel_of: impl Fn(&QaItem) -> Option<f64>) {
    let text = item.cot.text();
    assert_eq!(extract_final_answer(&text, item.expected()), match &item.answer {
        Answer::Number(v) => Extracted::Number(*v),
        Answer::Label(l) => Extracted::Label(l.clone()),
    });
    match (&item.answer, item.kind) {
        (Answer::Number(v), _) => {
            let got = evaluate(item.cot.expression());
            assert_eq!(round2(got), *v, "{}", item.cot.arithmetic);
            if let Some(px) = pixel_of(item) {
                assert!((first_number(item.cot.expression()) - px).abs() <= 1.0);
            }
        }
        (Answer::Label(_), TaskKind::ExtremeWhich) => {
            let (lhs, rhs) = item.cot.arithmetic.split_once(" = ").unwrap();
            assert_eq!(evaluate(lhs), rhs.parse::<f64>().unwrap());
        }
        _ => panic!("label answer on a numeric task"),
    }
}

#[test]
fn every_trace_evaluates_to_its_answer() {
    let corpus = gen_corpus(150, Mix::default(), 11).unwrap();
    let mut checked = 0;
    for c in &corpus {
        let meta = &c.chart.meta;
        for item in gen_qa_suite(meta, c.seed) {
            check_item(&item, |it| match &it.target {
                simvec_core::qa::Target::Key { category, time } => {
                    meta.binding(category, time).map(|b| b.pixel_extent as f64)
                }
                _ => None,
            });
            checked += 1;
        }
    }
    assert!(checked >= 400);
}

fn absolute_chart(seed: u64) -> Option<(simvec_core::chart::DataSpec, DataTable)> {
    let spec = synth_spec_constrained(seed, false);
    (spec.quantitative.mode == ValueMode::Absolute).then(|| {
        let t = synth_table(&spec, seed ^ 0x55);
        (spec, t)
    })
}

#[test]
fn extreme_labels_survive_value_scaling() {
    let mut seen = 0;
    for seed in 0..200u64 {
        let Some((spec, table)) = absolute_chart(seed) else { continue };
        let scaled = DataTable {
            rows: table
                .rows
                .iter()
                .map(|r| simvec_core::chart::DataRow { value: r.value * 7.0, ..r.clone() })
                .collect(),
            ..table.clone()
        };
        for ty in [ChartType::GroupedBar, ChartType::Line] {
            let a = render_chart(&spec, &table, ty, seed).unwrap().meta;
            let b = render_chart(&spec, &scaled, ty, seed).unwrap().meta;
            for scope in [Scope::Slice { time: table.times[0].clone() }, Scope::Series { category: table.categories[0].clone() }] {
                for ext in [Extreme::Max, Extreme::Min] {
                    let x = gen_extreme(&a, &scope, ext, AnswerForm::Which).unwrap();
                    let y = gen_extreme(&b, &scope, ext, AnswerForm::Which).unwrap();
                    assert_eq!(x.answer, y.answer);
                    check_item(&x, |_| None);
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 100);
}
