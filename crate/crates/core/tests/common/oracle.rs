//! Brute-force criteria computed from generator facts, never from the parser.

use metrica::Rational64 as Q;

use super::GenVerse;

fn stresses(v: &GenVerse) -> Vec<usize> {
    (1..=v.syllables.len()).filter(|&p| v.syllables[p - 1].stressed).collect()
}

fn jaccard(a: &GenVerse, b: &GenVerse) -> Q {
    let (sa, sb) = (stresses(a), stresses(b));
    let top = v_len(a).max(v_len(b));
    let (mut inter, mut union) = (0, 0);
    for p in 1..=top {
        let (x, y) = (sa.contains(&p), sb.contains(&p));
        inter += (x && y) as i64;
        union += (x || y) as i64;
    }
    if union == 0 {
        Q::from_integer(1)
    } else {
        Q::new(inter, union)
    }
}

fn v_len(v: &GenVerse) -> usize {
    v.syllables.len()
}

pub fn er(cand: &GenVerse, first: &GenVerse, prev: &GenVerse) -> Q {
    (jaccard(cand, first) + jaccard(cand, prev)) / 2
}

fn st_single(cand: &GenVerse, reference: &GenVerse) -> Q {
    let c: Vec<(usize, &str)> =
        stresses(cand).into_iter().map(|p| (p, cand.syllables[p - 1].letters.as_str())).collect();
    let r: Vec<(usize, &str)> =
        stresses(reference).into_iter().map(|p| (p, reference.syllables[p - 1].letters.as_str())).collect();
    let denom = c.len().min(r.len()) as i64;
    let mut used = vec![false; r.len()];
    let mut anywhere = 0;
    for (_, t) in &c {
        for (j, (_, u)) in r.iter().enumerate() {
            if !used[j] && t == u {
                used[j] = true;
                anywhere += 1;
                break;
            }
        }
    }
    let mut in_place = 0;
    for (p, t) in &c {
        for (q, u) in &r {
            if p == q && t == u {
                in_place += 1;
            }
        }
    }
    (Q::new(anywhere, denom) + Q::new(in_place, denom)) / 2
}

pub fn st(cand: &GenVerse, first: &GenVerse, prev: &GenVerse) -> Q {
    (st_single(cand, first) + st_single(cand, prev)) / 2
}

fn post_tonic(v: &GenVerse) -> usize {
    v_len(v) - stresses(v).last().copied().unwrap()
}

pub fn ac(cand: &GenVerse, reference: &GenVerse) -> Q {
    let class = |n: usize| n.min(2);
    Q::from_integer((class(post_tonic(cand)) == class(post_tonic(reference))) as i64)
}

fn suffix(v: &GenVerse) -> (String, char) {
    let last = *stresses(v).last().unwrap();
    let mut s = v.syllables[last - 1].tail_letters.clone();
    for syl in &v.syllables[last..] {
        s.push_str(&syl.letters);
    }
    (s, v.syllables[last - 1].base_vowel)
}

pub fn rtc(cand: &GenVerse, reference: &GenVerse) -> Q {
    let (sa, va) = suffix(cand);
    let (sb, vb) = suffix(reference);
    if sa == sb {
        Q::from_integer(1)
    } else if va == vb {
        Q::new(1, 2)
    } else {
        Q::from_integer(0)
    }
}

pub fn ri(v: &GenVerse) -> Q {
    let n = v_len(v);
    let unique = (0..n).filter(|&i| (0..i).all(|j| v.syllables[j].letters != v.syllables[i].letters)).count();
    Q::from_integer(1) - Q::new(unique as i64, n as i64)
}
