//! Slow, direct reimplementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

pub fn wrap(d: i64, m: i64) -> i64 {
    let r = d.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

/// Hamming distance if every (wrapped) offset is at most 1, else n + 1.
pub fn trunc_dist(u: &[i64], v: &[i64], moduli: Option<&[i64]>) -> usize {
    let n = u.len();
    let mut h = 0;
    for i in 0..n {
        let d = match moduli {
            Some(m) => wrap(v[i] - u[i], m[i]),
            None => v[i] - u[i],
        };
        if d.abs() > 1 {
            return n + 1;
        }
        if d != 0 {
            h += 1;
        }
    }
    h
}

/// Ball size around the origin of Z^n, counted over the window [-2, 2]^n.
pub fn ball_count(n: usize, t: usize) -> u64 {
    let origin = vec![0i64; n];
    let total = 5usize.pow(n as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let p: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (c % 5) as i64 - 2;
                    c /= 5;
                    d
                })
                .collect();
            trunc_dist(&origin, &p, None) <= t
        })
        .count() as u64
}

/// Ball size of a set of cells in Z^n.
pub fn shape_ball(cells: &[Vec<i64>], t: usize) -> usize {
    let n = cells[0].len();
    let mut seen = HashSet::new();
    for c in cells {
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut k = code;
            let p: Vec<i64> = c
                .iter()
                .map(|&x| {
                    let d = (k % 3) as i64 - 1;
                    k /= 3;
                    x + d
                })
                .collect();
            if trunc_dist(c, &p, None) <= t {
                seen.insert(p);
            }
        }
    }
    seen.len()
}

pub fn torus_points(moduli: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &m in moduli {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..m).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let nx = p[y];
        p[y] = r;
        y = nx;
    }
    r
}

/// Components of a torus code under unit steps, as sorted point lists.
pub fn components(code: &[Vec<i64>], moduli: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let k = code.len();
    let mut parent: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in i + 1..k {
            let steps: i64 = (0..moduli.len())
                .map(|a| wrap(code[j][a] - code[i][a], moduli[a]).abs())
                .sum();
            if steps == 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(code[i].clone());
    }
    groups
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect()
}

/// Every torus vertex lies within the radius of exactly one component.
pub fn is_partition(moduli: &[i64], comps: &[(Vec<Vec<i64>>, usize)]) -> bool {
    torus_points(moduli).iter().all(|p| {
        comps
            .iter()
            .filter(|(c, t)| c.iter().any(|q| trunc_dist(p, q, Some(moduli)) <= *t))
            .count()
            == 1
    })
}

/// Every vertex has a unique nearest code vertex.
pub fn unique_nearest(moduli: &[i64], code: &[Vec<i64>]) -> bool {
    torus_points(moduli).iter().all(|p| {
        let d: Vec<usize> = code.iter().map(|q| trunc_dist(p, q, Some(moduli))).collect();
        let m = *d.iter().min().unwrap();
        d.iter().filter(|&&x| x == m).count() == 1
    })
}

/// Least l1 distance between distinct components of the periodic lift of a torus code
/// whose components do not wrap.
pub fn min_lifted_l1(code: &[Vec<i64>], moduli: &[i64]) -> i64 {
    let comps = components(code, moduli);
    let mut label = HashMap::new();
    for (i, c) in comps.iter().enumerate() {
        for p in c {
            label.insert(p.clone(), i);
        }
    }
    let n = moduli.len();
    let shifts = 3usize.pow(n as u32);
    let mut best = i64::MAX;
    for u in code {
        for v in code {
            for s in 0..shifts {
                let mut k = s;
                let shift: Vec<i64> = (0..n)
                    .map(|a| {
                        let d = (k % 3) as i64 - 1;
                        k /= 3;
                        d * moduli[a]
                    })
                    .collect();
                let same = shift.iter().all(|&x| x == 0) && label[u] == label[v];
                if same {
                    continue;
                }
                let d: i64 = (0..n).map(|a| (v[a] + shift[a] - u[a]).abs()).sum();
                best = best.min(d);
            }
        }
    }
    best
}

/// All exact covers by brute force over tile subsets, each sorted, list sorted.
pub fn exact_covers(universe: usize, sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let masks: Vec<u64> = sets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &c| m | 1 << c))
        .collect();
    let full = if universe == 64 { u64::MAX } else { (1u64 << universe) - 1 };
    let mut out = Vec::new();
    for sub in 0u64..(1 << sets.len()) {
        let mut acc = 0u64;
        let mut ok = true;
        for (i, &m) in masks.iter().enumerate() {
            if sub >> i & 1 == 1 {
                if acc & m != 0 {
                    ok = false;
                    break;
                }
                acc |= m;
            }
        }
        if ok && acc == full {
            out.push((0..sets.len()).filter(|&i| sub >> i & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

/// Efficient dominating sets of P_m x P_n by checking every vertex subset.
pub fn grid_eds_count(m: usize, n: usize) -> usize {
    let cells = m * n;
    let nb: Vec<u64> = (0..cells)
        .map(|v| {
            let (r, c) = (v / n, v % n);
            let mut mask = 1u64 << v;
            if r > 0 {
                mask |= 1 << (v - n);
            }
            if r + 1 < m {
                mask |= 1 << (v + n);
            }
            if c > 0 {
                mask |= 1 << (v - 1);
            }
            if c + 1 < n {
                mask |= 1 << (v + 1);
            }
            mask
        })
        .collect();
    let sizes: Vec<u32> = nb.iter().map(|m| m.count_ones()).collect();
    let full = (1u64 << cells) - 1;
    let mut count = 0;
    for sub in 0u64..(1 << cells) {
        let mut acc = 0u64;
        let mut total = 0u32;
        let mut s = sub;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            acc |= nb[v];
            total += sizes[v];
            s &= s - 1;
        }
        if acc == full && total == cells as u32 {
            count += 1;
        }
    }
    count
}

/// Non-isolated perfect domination checked straight from the definition.
pub fn is_non_isolated_pds(adj: &[Vec<usize>], code: &[usize]) -> bool {
    let in_code: HashSet<usize> = code.iter().copied().collect();
    (0..adj.len()).filter(|v| !in_code.contains(v)).all(|v| {
        let hits: Vec<usize> = adj[v].iter().copied().filter(|u| in_code.contains(u)).collect();
        hits.len() == 1 || (hits.len() == 2 && adj[hits[0]].contains(&hits[1]))
    })
}

pub fn is_isolated_pds(adj: &[Vec<usize>], code: &[usize]) -> bool {
    let in_code: HashSet<usize> = code.iter().copied().collect();
    let independent = code.iter().all(|&c| adj[c].iter().all(|u| !in_code.contains(u)));
    independent
        && (0..adj.len())
            .filter(|v| !in_code.contains(v))
            .all(|v| adj[v].iter().filter(|u| in_code.contains(u)).count() == 1)
}

/// Raw tersquare words as letter vectors; glue appends or cancels.
pub fn raw_glue(w: &[u8], s: u8) -> Vec<u8> {
    let mut w = w.to_vec();
    if w.last() == Some(&s) {
        w.pop();
    } else {
        w.push(s);
    }
    w
}

type Raw = (Vec<u8>, Vec<u8>);

/// Number of distinct vertices of a union of tersquares, found by merging the
/// 9 local labels of each member with the matching labels across shared triangles.
pub fn tersquare_union_vertices(members: &[Raw]) -> usize {
    let idx: HashMap<&Raw, usize> = members.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..members.len() * 9).collect();
    for (i, (wx, wy)) in members.iter().enumerate() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                let me = i * 9 + (a * 3 + b) as usize;
                let across = [(raw_glue(wx, a), wy.clone()), (wx.clone(), raw_glue(wy, b))];
                for t in &across {
                    if let Some(&j) = idx.get(t) {
                        let other = j * 9 + (a * 3 + b) as usize;
                        let (x, y) = (find(&mut parent, me), find(&mut parent, other));
                        parent[x] = y;
                    }
                }
            }
        }
    }
    (0..parent.len())
        .map(|x| find(&mut parent, x))
        .collect::<HashSet<_>>()
        .len()
}

pub fn hive_members() -> Vec<Raw> {
    let mut m = vec![(vec![], vec![])];
    for s in 0..3 {
        m.push((vec![s], vec![]));
        m.push((vec![], vec![s]));
    }
    for i in 0..3 {
        for j in 0..3 {
            m.push((vec![i], vec![j]));
        }
    }
    m
}
