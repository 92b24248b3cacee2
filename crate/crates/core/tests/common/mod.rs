//! Shared fixtures, random generators and brute-force oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use wrapframe::avl::{parse, Desc, Formula, Term};
use wrapframe::json::from_json;
use wrapframe::model::Violation;
use wrapframe::morphism::Homomorphism;
use wrapframe::{validate, Entity, Label, Model, ModelBuilder, NodeId, WrapId};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn model(rel: &str) -> Model {
    from_json(&read(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn formula(rel: &str) -> Formula {
    parse(&read(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every `.json` model and `.avl` formula under fixtures/, by relative path.
pub fn all_fixtures() -> (Vec<(String, Model)>, Vec<(String, Formula)>) {
    let root = fixture("");
    let mut models = Vec::new();
    let mut formulas = Vec::new();
    let mut stack = vec![root.clone()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            let rel = p.strip_prefix(&root).unwrap().display().to_string();
            if p.is_dir() {
                stack.push(p);
            } else if rel.ends_with(".json") {
                models.push((rel.clone(), model(&rel)));
            } else if rel.ends_with(".avl") {
                formulas.push((rel.clone(), formula(&rel)));
            }
        }
    }
    models.sort_by(|a, b| a.0.cmp(&b.0));
    formulas.sort_by(|a, b| a.0.cmp(&b.0));
    (models, formulas)
}

pub const TYPES: &[&str] = &["t", "u"];
pub const ATTRS: &[&str] = &["P", "Q"];
pub const NODE_LABELS: &[&str] = &["@a", "@b", "?x", "?y", "?z", "@c", "@d"];
pub const WRAP_LABELS: &[&str] = &["$T", "$S"];

fn lab(s: &str) -> Label {
    s.parse().unwrap()
}

/// A random valid model with at most `max_nodes` nodes over the fixed vocabulary.
pub fn random_model(rng: &mut ChaCha8Rng, max_nodes: usize) -> Model {
    loop {
        if let Some(m) = try_random_model(rng, max_nodes) {
            return m;
        }
    }
}

fn try_random_model(rng: &mut ChaCha8Rng, max_nodes: usize) -> Option<Model> {
    let n = rng.gen_range(1..=max_nodes);
    let nw = rng.gen_range(0..=2usize);
    let home: Vec<Option<usize>> =
        (0..n).map(|_| if nw > 0 && rng.gen_bool(0.4) { Some(rng.gen_range(0..nw)) } else { None }).collect();
    let mut b = ModelBuilder::new();
    let ids: Vec<NodeId> = (0..n).map(|_| b.add_node()).collect();
    let mut wraps: BTreeMap<usize, WrapId> = BTreeMap::new();
    for (i, h) in home.iter().enumerate() {
        if let Some(j) = h {
            let w = wraps.entry(*j).or_insert_with(|| b.add_wrapping()).clone();
            b.add_member(&w, ids[i]).ok()?;
        }
    }
    for id in &ids {
        for t in TYPES {
            if rng.gen_bool(0.3) {
                b.add_type(&Entity::Node(*id), *t).ok()?;
            }
        }
    }
    for i in 0..n {
        for a in ATTRS {
            if !rng.gen_bool(0.35) {
                continue;
            }
            let targets: Vec<Entity> = match home[i] {
                Some(j) => (0..n).filter(|k| home[*k] == Some(j)).map(|k| Entity::Node(ids[k])).collect(),
                None => ids
                    .iter()
                    .map(|x| Entity::Node(*x))
                    .chain(wraps.values().map(|w| Entity::Wrap(w.clone())))
                    .collect(),
            };
            let t = targets.choose(rng)?.clone();
            b.set_attr(ids[i], a.to_string(), t).ok()?;
        }
    }
    if rng.gen_bool(0.3) {
        let ents: Vec<Entity> =
            ids.iter().map(|x| Entity::Node(*x)).chain(wraps.values().map(|w| Entity::Wrap(w.clone()))).collect();
        let args = vec![ents.choose(rng)?.clone(), ents.choose(rng)?.clone()];
        b.add_rel("r", args);
    }
    for (w, l) in wraps.values().zip(WRAP_LABELS) {
        if rng.gen_bool(0.6) {
            b.add_label(&Entity::Wrap(w.clone()), lab(l)).ok()?;
        }
    }
    let mut pool: Vec<&str> = NODE_LABELS.to_vec();
    pool.shuffle(rng);
    // A few labels at random, then label unreachable nodes until none is left.
    for id in &ids {
        if rng.gen_bool(0.2) {
            b.add_label(&Entity::Node(*id), lab(pool.pop()?)).ok()?;
        }
    }
    loop {
        let m = b.clone().build().ok()?;
        let v = validate(&m);
        let unreachable: Vec<NodeId> =
            v.iter().filter_map(|x| if let Violation::Unreachable(n) = x { Some(*n) } else { None }).collect();
        if v.len() > unreachable.len() {
            return None;
        }
        if unreachable.is_empty() {
            return Some(m);
        }
        let n = *unreachable.choose(rng)?;
        b.add_label(&Entity::Node(n), lab(pool.pop()?)).ok()?;
    }
}

/// A model `d` with `m ⊑ d`, built by adding information or merging nodes.
pub fn extend(rng: &mut ChaCha8Rng, m: &Model, max_nodes: usize) -> Model {
    for _ in 0..50 {
        if let Some(d) = try_extend(rng, m, max_nodes) {
            return d;
        }
    }
    m.clone()
}

fn try_extend(rng: &mut ChaCha8Rng, m: &Model, max_nodes: usize) -> Option<Model> {
    let mut b = m.to_builder();
    let ops = rng.gen_range(1..=3);
    for _ in 0..ops {
        let nodes = b.node_ids();
        let n = *nodes.choose(rng)?;
        match rng.gen_range(0..6) {
            0 => {
                b.add_type(&Entity::Node(n), *TYPES.choose(rng)?).ok()?;
            }
            1 => {
                let a = *ATTRS.choose(rng)?;
                if b.attr(n, a).is_some() {
                    continue;
                }
                let home = b.container(n);
                let t = if nodes.len() < max_nodes && rng.gen_bool(0.5) {
                    let f = b.add_node();
                    if let Some(w) = &home {
                        b.add_member(w, f).ok()?;
                    }
                    Entity::Node(f)
                } else {
                    let same: Vec<NodeId> = nodes.iter().copied().filter(|x| b.container(*x) == home).collect();
                    Entity::Node(*same.choose(rng)?)
                };
                b.set_attr(n, a.to_string(), t).ok()?;
            }
            2 => {
                let x = Entity::Node(*nodes.choose(rng)?);
                b.add_rel("r", vec![Entity::Node(n), x]);
            }
            3 => {
                let home = b.container(n);
                let same: Vec<NodeId> = nodes.iter().copied().filter(|x| *x != n && b.container(*x) == home).collect();
                let into = *same.choose(rng)?;
                b.merge_into(&Entity::Node(n), &Entity::Node(into)).ok()?;
            }
            4 => {
                let used: BTreeSet<Label> = b.clone().build().ok()?.label_index().keys().cloned().collect();
                let free: Vec<&&str> = NODE_LABELS.iter().filter(|l| !used.contains(&lab(l))).collect();
                b.add_label(&Entity::Node(n), lab(free.choose(rng)?)).ok()?;
            }
            _ => {
                // Collapse an unlabelled, childless complement node onto a wrapping.
                let cur = b.clone().build().ok()?;
                let d = cur.node(n)?;
                if cur.container(n).is_some() || !d.labels.is_empty() || !d.types.is_empty() || cur.out_edges(n).next().is_some() {
                    continue;
                }
                let w = cur.wrappings().map(|(w, _)| w.clone()).collect::<Vec<_>>().choose(rng)?.clone();
                b.merge_into(&Entity::Node(n), &Entity::Wrap(w)).ok()?;
            }
        }
    }
    let d = b.build().ok()?;
    validate(&d).is_empty().then_some(d)
}

/// The same model with shuffled node ids and renamed wrappings.
pub fn permute(rng: &mut ChaCha8Rng, m: &Model) -> Model {
    let mut ids: Vec<u32> = (100..100 + m.node_count() as u32).collect();
    ids.shuffle(rng);
    let nmap: BTreeMap<NodeId, NodeId> = m.node_ids().zip(ids.into_iter().map(NodeId)).collect();
    let mut wnames: Vec<String> = (0..m.wrapping_count()).map(|i| format!("v{i}")).collect();
    wnames.shuffle(rng);
    let wmap: BTreeMap<WrapId, WrapId> = m.wrappings().map(|(w, _)| w.clone()).zip(wnames.into_iter().map(WrapId)).collect();
    let conv = |e: &Entity| match e {
        Entity::Node(n) => Entity::Node(nmap[n]),
        Entity::Wrap(w) => Entity::Wrap(wmap[w].clone()),
    };
    let mut b = ModelBuilder::new();
    for (n, d) in m.nodes() {
        b.add_node_with_id(nmap[&n]).unwrap();
        for l in &d.labels {
            b.add_label(&Entity::Node(nmap[&n]), l.clone()).unwrap();
        }
        for t in &d.types {
            b.add_type(&Entity::Node(nmap[&n]), t.clone()).unwrap();
        }
    }
    for (w, d) in m.wrappings() {
        let w2 = b.add_wrapping_with_id(wmap[w].clone()).unwrap();
        for x in &d.members {
            b.add_member(&w2, nmap[x]).unwrap();
        }
        for l in &d.labels {
            b.add_label(&Entity::Wrap(w2.clone()), l.clone()).unwrap();
        }
        for t in &d.types {
            b.add_type(&Entity::Wrap(w2.clone()), t.clone()).unwrap();
        }
    }
    for (n, a, t) in m.attrs() {
        b.set_attr(nmap[&n], a.to_string(), conv(t)).unwrap();
    }
    for (r, args) in m.rels() {
        b.add_rel(r.clone(), args.iter().map(conv).collect());
    }
    b.build().unwrap()
}

fn image(h: &Homomorphism, e: &Entity) -> Option<Entity> {
    match e {
        Entity::Node(n) => h.node_map.get(n).cloned(),
        Entity::Wrap(w) => h.wrap_map.get(w).cloned().map(Entity::Wrap),
    }
}

/// The homomorphism conditions, written out from the definition.
pub fn oracle_is_hom(src: &Model, dst: &Model, h: &Homomorphism) -> bool {
    let types = |m: &Model, e: &Entity| m.types_of(e).cloned().unwrap_or_default();
    for (n, d) in src.nodes() {
        let Some(img) = h.node_map.get(&n) else { return false };
        if !d.types.is_subset(&types(dst, img)) {
            return false;
        }
        for (a, t) in src.out_edges(n) {
            let Entity::Node(i) = img else { return false };
            if dst.attr(*i, a).cloned() != image(h, t) {
                return false;
            }
        }
        if let Some(w) = src.container(n) {
            let Entity::Node(i) = img else { return false };
            if dst.container(*i) != h.wrap_map.get(w) {
                return false;
            }
        }
    }
    for (w, d) in src.wrappings() {
        let Some(wi) = h.wrap_map.get(w) else { return false };
        if !d.types.is_subset(&types(dst, &Entity::Wrap(wi.clone()))) {
            return false;
        }
    }
    for (r, args) in src.rels() {
        let img: Option<Vec<Entity>> = args.iter().map(|a| image(h, a)).collect();
        if !img.is_some_and(|img| dst.has_rel(r, &img)) {
            return false;
        }
    }
    src.label_index().iter().all(|(l, e)| image(h, e).is_some() && image(h, e).as_ref() == dst.lookup(l))
}

/// All homomorphisms `src -> dst`, by exhaustive search with label pruning.
pub fn all_homs(src: &Model, dst: &Model) -> Vec<Homomorphism> {
    let snodes: Vec<NodeId> = src.node_ids().collect();
    let swraps: Vec<WrapId> = src.wrappings().map(|(w, _)| w.clone()).collect();
    let dents: Vec<Entity> = dst
        .node_ids()
        .map(Entity::Node)
        .chain(dst.wrappings().map(|(w, _)| Entity::Wrap(w.clone())))
        .collect();
    let dwraps: Vec<WrapId> = dst.wrappings().map(|(w, _)| w.clone()).collect();
    let cands = |e: &Entity, pool: &[Entity]| -> Vec<Entity> {
        let labels = src.labels_of(e).cloned().unwrap_or_default();
        pool.iter()
            .filter(|c| labels.iter().all(|l| dst.lookup(l) == Some(*c)))
            .cloned()
            .collect()
    };
    let node_cands: Vec<Vec<Entity>> = snodes.iter().map(|n| cands(&Entity::Node(*n), &dents)).collect();
    let wpool: Vec<Entity> = dwraps.iter().cloned().map(Entity::Wrap).collect();
    let wrap_cands: Vec<Vec<Entity>> = swraps.iter().map(|w| cands(&Entity::Wrap(w.clone()), &wpool)).collect();

    let mut out = Vec::new();
    let mut h = Homomorphism::default();
    fn wraps_rec(
        i: usize,
        swraps: &[WrapId],
        wrap_cands: &[Vec<Entity>],
        h: &mut Homomorphism,
        src: &Model,
        dst: &Model,
        out: &mut Vec<Homomorphism>,
    ) {
        if i == swraps.len() {
            if oracle_is_hom(src, dst, h) {
                out.push(h.clone());
            }
            return;
        }
        for c in &wrap_cands[i] {
            h.wrap_map.insert(swraps[i].clone(), c.as_wrap().unwrap().clone());
            wraps_rec(i + 1, swraps, wrap_cands, h, src, dst, out);
        }
        h.wrap_map.remove(&swraps[i]);
    }
    #[allow(clippy::too_many_arguments)]
    fn nodes_rec(
        i: usize,
        snodes: &[NodeId],
        node_cands: &[Vec<Entity>],
        swraps: &[WrapId],
        wrap_cands: &[Vec<Entity>],
        h: &mut Homomorphism,
        src: &Model,
        dst: &Model,
        out: &mut Vec<Homomorphism>,
    ) {
        if i == snodes.len() {
            wraps_rec(0, swraps, wrap_cands, h, src, dst, out);
            return;
        }
        let n = snodes[i];
        for c in &node_cands[i] {
            if !src.node(n).unwrap().types.is_subset(dst.types_of(c).unwrap()) {
                continue;
            }
            h.node_map.insert(n, c.clone());
            // Attribute edges between already-placed nodes must commute.
            let ok = snodes[..=i].iter().all(|m| {
                src.out_edges(*m).all(|(a, t)| match t {
                    Entity::Node(t) if h.node_map.contains_key(t) => match &h.node_map[m] {
                        Entity::Node(mi) => dst.attr(*mi, a) == Some(&h.node_map[t]),
                        Entity::Wrap(_) => false,
                    },
                    _ => true,
                })
            });
            if ok {
                nodes_rec(i + 1, snodes, node_cands, swraps, wrap_cands, h, src, dst, out);
            }
        }
        h.node_map.remove(&n);
    }
    nodes_rec(0, &snodes, &node_cands, &swraps, &wrap_cands, &mut h, src, dst, &mut out);
    out
}

/// Isomorphism by exhaustive search for a bijective homomorphism whose inverse is one too.
pub fn oracle_iso(a: &Model, b: &Model) -> bool {
    if a.node_count() != b.node_count() || a.wrapping_count() != b.wrapping_count() {
        return false;
    }
    all_homs(a, b).into_iter().any(|h| {
        let imgs: BTreeSet<&Entity> = h.node_map.values().collect();
        if imgs.len() != a.node_count() || imgs.iter().any(|e| e.as_node().is_none()) {
            return false;
        }
        let inv = Homomorphism {
            node_map: h.node_map.iter().map(|(k, v)| (v.as_node().unwrap(), Entity::Node(*k))).collect(),
            wrap_map: h.wrap_map.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        };
        inv.wrap_map.len() == b.wrapping_count() && oracle_is_hom(b, a, &inv)
    })
}

/// Matches two model lists pairwise up to isomorphism, order ignored.
pub fn same_models(a: &[Model], b: &[Model]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| oracle_iso(x, y)))
}

// ---- formulas ----

const F_NODE_LABELS: &[&str] = &["@a", "@b", "?x", "?y"];

fn path(rng: &mut ChaCha8Rng, max: usize) -> Vec<String> {
    (0..rng.gen_range(0..=max)).map(|_| ATTRS.choose(rng).unwrap().to_string()).collect()
}

pub fn random_desc(rng: &mut ChaCha8Rng, depth: usize) -> Desc {
    let k = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..6) };
    match k {
        0 => Desc::ty(*TYPES.choose(rng).unwrap()),
        1 => Desc::Label(lab(F_NODE_LABELS.choose(rng).unwrap())),
        2 => Desc::Top,
        3 | 4 => Desc::attr(*ATTRS.choose(rng).unwrap(), random_desc(rng, depth - 1)),
        _ => {
            let (a, b) = (random_desc(rng, depth - 1), random_desc(rng, depth - 1));
            if rng.gen_bool(0.7) {
                Desc::and(a, b)
            } else {
                Desc::or(a, b)
            }
        }
    }
}

fn random_conjunct(rng: &mut ChaCha8Rng) -> Formula {
    let node = |rng: &mut ChaCha8Rng| lab(F_NODE_LABELS.choose(rng).unwrap());
    match rng.gen_range(0..6) {
        0 | 1 => Formula::At(node(rng), random_desc(rng, 2)),
        2 => Formula::PathEq(Term::new(node(rng), path(rng, 2)), Term::new(node(rng), path(rng, 1))),
        3 => Formula::Rel("r".into(), vec![Term::new(node(rng), path(rng, 1)), Term::new(node(rng), path(rng, 1))]),
        _ => {
            let x = if rng.gen_bool(0.5) { "?x" } else { "?y" };
            Formula::Wrap(lab(WRAP_LABELS.choose(rng).unwrap()), lab(x), random_desc(rng, 2))
        }
    }
}

/// One to three conjuncts; with `negation`, some may be negated.
pub fn random_formula(rng: &mut ChaCha8Rng, negation: bool) -> Formula {
    let n = rng.gen_range(1..=3);
    Formula::all((0..n).map(|_| {
        let c = random_conjunct(rng);
        if negation && rng.gen_bool(0.25) {
            Formula::not(c)
        } else {
            c
        }
    }))
}

/// Every single-element weakening of `m`: drop one edge, type, relation tuple,
/// label or wrapping, unwrap one node, or split one shared node. Unreachable
/// leftovers are pruned; only valid results strictly below `m` are kept.
pub fn weakenings(m: &Model) -> Vec<Model> {
    let mut out: Vec<ModelBuilder> = Vec::new();
    let base = m.to_builder();
    let entities: Vec<Entity> =
        m.node_ids().map(Entity::Node).chain(m.wrappings().map(|(w, _)| Entity::Wrap(w.clone()))).collect();
    for (from, a, _) in m.attrs() {
        let mut b = base.clone();
        b.remove_attr(from, a);
        out.push(b);
    }
    for e in &entities {
        for t in m.types_of(e).into_iter().flatten() {
            let mut b = base.clone();
            b.remove_type(e, t).unwrap();
            out.push(b);
        }
        for l in m.labels_of(e).into_iter().flatten() {
            let mut b = base.clone();
            b.remove_label(e, l).unwrap();
            out.push(b);
        }
    }
    for (r, args) in m.rels() {
        let mut b = base.clone();
        b.remove_rel(r, args);
        out.push(b);
    }
    for (w, d) in m.wrappings() {
        let mut b = base.clone();
        b.remove_wrapping(w);
        out.push(b);
        for n in &d.members {
            let mut b = base.clone();
            b.remove_member(w, *n);
            out.push(b);
        }
    }
    // Splitting: one incoming pointer (label or edge) moves to a bare copy.
    for n in m.node_ids() {
        let e = Entity::Node(n);
        let labels: Vec<Label> = m.labels_of(&e).into_iter().flatten().cloned().collect();
        let incoming: Vec<(NodeId, String)> =
            m.attrs().filter(|(_, _, t)| **t == e).map(|(f, a, _)| (f, a.to_string())).collect();
        if labels.len() + incoming.len() < 2 {
            continue;
        }
        let split = |b: &mut ModelBuilder| {
            let c = b.add_node();
            if let Some(w) = m.container(n) {
                b.add_member(w, c).unwrap();
            }
            c
        };
        for l in &labels {
            let mut b = base.clone();
            let c = split(&mut b);
            b.remove_label(&e, l).unwrap();
            b.add_label(&Entity::Node(c), l.clone()).unwrap();
            out.push(b);
        }
        for (f, a) in &incoming {
            let mut b = base.clone();
            let c = split(&mut b);
            b.remove_attr(*f, a);
            b.set_attr(*f, a.clone(), Entity::Node(c)).unwrap();
            out.push(b);
        }
    }
    out.into_iter()
        .filter_map(|mut b| {
            b.prune_unreachable();
            let w = b.build().ok()?;
            let below = wrapframe::morphism::subsumes(&w, m) && !wrapframe::morphism::subsumes(m, &w);
            (w.node_count() > 0 && validate(&w).is_empty() && below).then_some(w)
        })
        .collect()
}

/// Atoms shared by both listed fact-sets of the abstract example, exactly as
/// printed (lower-case attributes mapped to the fixture's `P`/`Q`).
const FACT_COMMON: &[&str] = &[
    "IN(?x, $T1)", "?x.P.P == ?x", "@b.Q == $T3", "IN(?y, $T2)", "?y.P:t", "r(@b, ?y)", "?x.P == ?y",
    "IN(?z, $T3)", "?z.Q:TOP", "?x.P.P:TOP", "?x.P:TOP", "?x:TOP", "INWR(?x)", "WR($T1)", "INWR($T2)",
    "?y.P:TOP", "?y:TOP", "@b.Q:TOP", "@b:TOP", "INWR(?z)", "WR($T3)", "?z:TOP", "$T1 == $T2",
    "IN(?x, $T2)", "IN(?y, $T1)",
];

/// The printed listing: (cycle variant, loop variant).
pub fn fact_listing() -> (Vec<wrapframe::avl::Atom>, Vec<wrapframe::avl::Atom>) {
    let p = |s: &&str| wrapframe::avl::parse_atom(s).unwrap();
    let u1 = FACT_COMMON.iter().chain(&["?y.P.P == ?y", "?x.P.P:t"]).map(p).collect();
    let u2 = FACT_COMMON
        .iter()
        .chain(&["?y.P == ?y", "?x.P.P:t", "?x.P.P == ?x.P", "?x.P == ?x", "?x.P:t"])
        .map(p)
        .collect();
    (u1, u2)
}

/// Listed atoms that are false in the models the listing describes: `T2` names
/// a wrapping, so it is never a wrapped node, and in the loop variant `x` is
/// not its own `P` or `PP` successor.
pub fn fact_listing_errata() -> (Vec<wrapframe::avl::Atom>, Vec<wrapframe::avl::Atom>) {
    let p = |s: &&str| wrapframe::avl::parse_atom(s).unwrap();
    (["INWR($T2)"].iter().map(p).collect(), ["INWR($T2)", "?x.P.P == ?x", "?x.P == ?x"].iter().map(p).collect())
}

pub mod expected {
    use wrapframe::fol::{Fol, Pred};

    fn s(x: &str) -> String {
        x.to_string()
    }
    fn ty(t: &str, x: &str) -> Fol {
        Fol::atom(Pred::Type(s(t)), &[x])
    }
    fn at(a: &str, x: &str, y: &str) -> Fol {
        Fol::atom(Pred::Attr(s(a)), &[x, y])
    }
    /// `exists v. (noun(v) & v = u)`
    fn restr(noun: &str, v: &str, u: &str) -> Fol {
        Fol::exists(vec![s(v)], Fol::and(vec![ty(noun, v), Fol::eq(v, u)]))
    }

    /// Every dog barks.
    pub fn bark_dog() -> Fol {
        Fol::forall(
            vec![s("u")],
            Fol::implies(
                restr("dog", "x2", "u"),
                Fol::exists(
                    vec![s("z0"), s("x1")],
                    Fol::and(vec![ty("barking", "z0"), at("agent", "z0", "x1"), Fol::eq("x1", "u")]),
                ),
            ),
        )
    }

    /// The stroking event with `agent = who` and `theme = what`.
    fn stroking(who: &str, what: &str) -> Fol {
        Fol::exists(
            vec![s("z"), s("a"), s("t")],
            Fol::and(vec![
                ty("stroking", "z"),
                at("agent", "z", "a"),
                at("theme", "z", "t"),
                Fol::eq("a", who),
                Fol::eq("t", what),
            ]),
        )
    }

    /// A student, then every cat.
    pub fn stroking_a_over_every() -> Fol {
        Fol::exists(
            vec![s("v")],
            Fol::and(vec![
                restr("student", "x", "v"),
                Fol::forall(vec![s("u")], Fol::implies(restr("cat", "w", "u"), stroking("v", "u"))),
            ]),
        )
    }

    /// Every cat, then a student.
    pub fn stroking_every_over_a() -> Fol {
        Fol::forall(
            vec![s("u")],
            Fol::implies(
                restr("cat", "w", "u"),
                Fol::exists(vec![s("v")], Fol::and(vec![restr("student", "x", "v"), stroking("v", "u")])),
            ),
        )
    }
}

/// Two students, each stroking a different cat.
pub fn two_strokers() -> Model {
    let mut b = ModelBuilder::new();
    for i in 1..=2 {
        let st = b.add_node();
        let cat = b.add_node();
        let ev = b.add_node();
        b.add_type(&Entity::Node(st), "student").unwrap();
        b.add_type(&Entity::Node(cat), "cat").unwrap();
        b.add_type(&Entity::Node(ev), "stroking").unwrap();
        b.add_label(&Entity::Node(ev), Label::base(format!("e{i}"))).unwrap();
        b.add_label(&Entity::Node(cat), Label::base(format!("c{i}"))).unwrap();
        b.set_attr(ev, "agent", Entity::Node(st)).unwrap();
        b.set_attr(ev, "theme", Entity::Node(cat)).unwrap();
    }
    b.build().unwrap()
}

/// Longest shortest attribute path from a labelled node of the same w-set,
/// or `None` when some node is not reached at all.
pub fn access_depth(m: &Model) -> Option<usize> {
    let mut dist: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    for n in m.node_ids() {
        if m.labels_of(&Entity::Node(n)).is_some_and(|l| !l.is_empty()) {
            dist.insert(n, 0);
            queue.push_back(n);
        }
    }
    while let Some(n) = queue.pop_front() {
        for (_, t) in m.out_edges(n) {
            if let Entity::Node(t) = t {
                if m.container(*t) == m.container(n) && !dist.contains_key(t) {
                    dist.insert(*t, dist[&n] + 1);
                    queue.push_back(*t);
                }
            }
        }
    }
    (dist.len() == m.node_count()).then(|| dist.values().copied().max().unwrap_or(0))
}

pub fn axioms_hold(m: &Model) -> bool {
    use wrapframe::fol::{fol_eval, theory_axioms, translate_model};
    let s = translate_model(m);
    let depth = access_depth(m).unwrap_or(m.node_count().min(3));
    theory_axioms(&wrapframe::Signature::of_model(m), depth).iter().all(|a| fol_eval(&s, a).unwrap())
}
