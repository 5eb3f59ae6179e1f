//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Randomised checks use fixed seeds so every run is identical.

mod support;

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use conceptdb::algebra::{combine, count, deproject, project, sum_path, DimRef};
use conceptdb::coql::{parse_query, parse_statement, render_expr, render_statement};
use conceptdb::inference::infer;
use conceptdb::schema::{Note, Violation};
use conceptdb::session::{load_snapshot, save_snapshot};
use conceptdb::store::Resolved;
use conceptdb::{
    eval_query, olap_run, Concept, Database, Domain, ElementSet, Level, Measure, OlapSpec, PrimitiveType, Schema,
    Session, Val, Value,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::preds::{gen_pred, oracle_pred, pred_text};
use support::{eval_set, field_values, fixture_session, ints, Flat, FlatParams};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn ids_in(flat: &Flat, c: usize, set: &ElementSet) -> BTreeSet<i64> {
    flat.ids_of(c, set)
}

fn bank_projection() -> Check {
    let s = fixture_session("bankdemo");
    let addresses = eval_set(&s, "(Persons | name STARTSWITH 'A') -> address -> (Addresses | zip == '12345')");
    let persons = eval_set(&s, "(Addresses | zip == '12345') <- address <- (Persons | name STARTSWITH 'A')");
    let (a, p) = (field_values(&s.db, &addresses, "no"), field_values(&s.db, &persons, "id"));
    ensure!(a == ints(&[16, 17]), "addresses {a:?}");
    ensure!(p == ints(&[22, 23, 24]), "persons {p:?}");
    Ok("addresses {16, 17}, persons {22, 23, 24}".into())
}

fn shop_inference() -> Check {
    let s = fixture_session("shopdemo");
    let orders = eval_set(&s, "(Products | name IN {'beer','chips'}) <-*-> Orders");
    let items = eval_set(&s, "(Products | name IN {'beer','chips'}) <- LineItems");
    let o = field_values(&s.db, &orders, "id");
    ensure!(o == ints(&[23, 24]), "orders {o:?}");
    ensure!(items.len() == 3, "{} line items", items.len());
    Ok("orders {23, 24} through 3 line items".into())
}

fn sport_bottom() -> Check {
    let s = fixture_session("sportdemo");
    let all = eval_set(&s, "( Coaches | name == 'Klinsmann' ) <-*(Bottom)*-> Players");
    ensure!(all == s.db.all("Players").unwrap(), "unconstrained: {} players", all.len());
    let linked = eval_set(&s, "( Coaches | name == 'Klinsmann' ) <-*(Bottom | Trains.team == Plays.team)*-> Players");
    let zigzag = eval_set(&s, "( Coaches | name == 'Klinsmann' ) <- Trains -> Teams <- Plays -> Players");
    ensure!(linked == zigzag, "constrained {linked:?} vs path {zigzag:?}");
    ensure!(field_values(&s.db, &zigzag, "id") == ints(&[10, 11, 12, 13]), "zigzag {zigzag:?}");
    Ok(format!("all {} players unconstrained; constrained = path = {} players", all.len(), zigzag.len()))
}

/// De-project `set` down every path from `lesser` and union the results.
fn down_all(flat: &Flat, set: &ElementSet, from: usize, lesser: usize) -> ElementSet {
    let mut out = ElementSet::empty(flat.concepts[lesser].coll.clone());
    for path in flat.up_paths(lesser, from) {
        let mut cur = set.clone();
        for (c, k) in path.iter().rev() {
            cur = deproject(&flat.db, &cur, DimRef::Named(&flat.concepts[*c].dims[*k].0), &flat.concepts[*c].coll).unwrap();
        }
        out.members.extend(cur.members);
    }
    out
}

fn up_all(flat: &Flat, set: &ElementSet, lesser: usize, target: usize) -> ElementSet {
    let mut out = ElementSet::empty(flat.concepts[target].coll.clone());
    for path in flat.up_paths(lesser, target) {
        let mut cur = set.clone();
        for (c, k) in &path {
            let (d, to) = &flat.concepts[*c].dims[*k];
            cur = project(&flat.db, &cur, DimRef::Named(d), &flat.concepts[*to].coll).unwrap();
        }
        out.members.extend(cur.members);
    }
    out
}

fn inference_paths() -> Check {
    let mut cases = 0;
    let mut seed = 0u64;
    let mut nonempty = 0;
    while cases < 200 {
        seed += 1;
        ensure!(seed < 20_000, "only {cases} schemas with a unique common lesser found");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flat = support::random_flat(&mut rng, &FlatParams { concepts: 6, max_rows: 50, ..Default::default() });
        let n = flat.concepts.len();
        let sources: Vec<(usize, ElementSet)> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let c = rng.gen_range(0..n);
                (c, flat.set(c, support::subset(&mut rng, &flat.ids(c), 0.4)))
            })
            .collect();
        let target = rng.gen_range(0..n);
        let mut concepts: Vec<usize> = sources.iter().map(|(c, _)| *c).collect();
        concepts.push(target);
        let [l] = flat.common_lesser(&concepts)[..] else { continue };
        cases += 1;

        // the schema's dimension paths are the ones the composition follows
        for &k in &concepts {
            let mut from_schema = flat.db.schema().dimension_paths(&flat.concepts[l].name, &flat.concepts[k].name).unwrap();
            let mut from_shadow: Vec<Vec<String>> = flat.up_paths(l, k).iter().map(|p| flat.path_names(p)).collect();
            from_schema.sort();
            from_shadow.sort();
            ensure!(from_schema == from_shadow, "seed {seed}: paths from K{l} to K{k}");
        }
        let mut through = flat.db.all(&flat.concepts[l].coll).unwrap();
        for (c, set) in &sources {
            let down = down_all(&flat, set, *c, l);
            through.members.retain(|m| down.contains(m));
        }
        let want = up_all(&flat, &through, l, target);
        let sets: Vec<ElementSet> = sources.iter().map(|(_, s)| s.clone()).collect();
        let got = infer(&flat.db, &sets, &flat.concepts[target].coll).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(got == want, "seed {seed}: infer {got:?} vs composition {want:?}");
        nonempty += usize::from(!got.is_empty());
    }
    Ok(format!("200 schemas agree ({nonempty} with non-empty results)"))
}

/// A random flat database with at least one dimension, and one of them.
fn edge_draw(seed: u64, null_p: f64) -> Option<(Flat, ChaCha8Rng, usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flat = support::random_flat(&mut rng, &FlatParams { null_p, ..Default::default() });
    let edges: Vec<(usize, usize)> =
        flat.concepts.iter().enumerate().flat_map(|(c, k)| (0..k.dims.len()).map(move |d| (c, d))).collect();
    if edges.is_empty() {
        return None;
    }
    let (c, k) = edges[rng.gen_range(0..edges.len())];
    let j = flat.concepts[c].dims[k].1;
    Some((flat, rng, c, k, j))
}

fn adjunction() -> Check {
    let mut draws = 0;
    let mut seed = 0;
    let mut strict_upper = 0;
    while draws < 500 {
        seed += 1;
        let Some((flat, mut rng, c, k, j)) = edge_draw(seed, 0.0) else { continue };
        // an empty target collection forces NULL references even here
        if flat.concepts[c].rows.iter().any(|r| r.refs[k].is_none()) {
            continue;
        }
        draws += 1;
        let db = &flat.db;
        let d = flat.concepts[c].dims[k].0.as_str();
        let (lc, gc) = (&flat.concepts[c].coll, &flat.concepts[j].coll);
        let t = flat.set(c, support::subset(&mut rng, &flat.ids(c), 0.5));
        let round = deproject(db, &project(db, &t, DimRef::Named(d), gc).unwrap(), DimRef::Named(d), lc).unwrap();
        ensure!(t.is_subset(&round), "seed {seed}: lower bound");
        let s_ids = support::subset(&mut rng, &flat.ids(j), 0.6);
        let s = flat.set(j, s_ids.iter().copied());
        let round = project(db, &deproject(db, &s, DimRef::Named(d), lc).unwrap(), DimRef::Named(d), gc).unwrap();
        ensure!(round.is_subset(&s), "seed {seed}: upper bound");
        let referenced: BTreeSet<i64> =
            s_ids.iter().copied().filter(|g| flat.concepts[c].rows.iter().any(|r| r.refs[k] == Some(*g))).collect();
        ensure!(ids_in(&flat, j, &round) == referenced, "seed {seed}: equality condition");
        strict_upper += usize::from(round.len() < s.len());
    }
    // with NULL references the lower bound holds for every member whose
    // reference is set, and only those
    let mut null_draws = 0;
    let mut dropped = 0;
    while null_draws < 500 {
        seed += 1;
        let Some((flat, mut rng, c, k, j)) = edge_draw(seed, 0.2) else { continue };
        null_draws += 1;
        let d = flat.concepts[c].dims[k].0.as_str();
        let t_ids = support::subset(&mut rng, &flat.ids(c), 0.5);
        let t = flat.set(c, t_ids.iter().copied());
        let round = deproject(
            &flat.db,
            &project(&flat.db, &t, DimRef::Named(d), &flat.concepts[j].coll).unwrap(),
            DimRef::Named(d),
            &flat.concepts[c].coll,
        )
        .unwrap();
        let back = ids_in(&flat, c, &round);
        for i in &t_ids {
            let set = flat.row(c, *i).refs[k].is_some();
            ensure!(back.contains(i) == set, "seed {seed}: member {i}");
            dropped += usize::from(!set);
        }
    }
    Ok(format!(
        "500 total draws hold ({strict_upper} with strict upper bound); 500 draws with NULLs drop exactly the {dropped} NULL-referencing members"
    ))
}

fn oracles() -> Check {
    for seed in 1..=500u64 {
        // project and deproject
        let Some((flat, mut rng, c, k, j)) = edge_draw(seed, 0.1).or_else(|| edge_draw(seed + 100_000, 0.1)) else {
            return Err(format!("seed {seed}: no edge"));
        };
        let db = &flat.db;
        let d = flat.concepts[c].dims[k].0.as_str();
        let t_ids = support::subset(&mut rng, &flat.ids(c), 0.5);
        let up = project(db, &flat.set(c, t_ids.iter().copied()), DimRef::Named(d), &flat.concepts[j].coll).unwrap();
        let want: BTreeSet<i64> = t_ids.iter().filter_map(|i| flat.row(c, *i).refs[k]).collect();
        ensure!(ids_in(&flat, j, &up) == want, "seed {seed}: project");
        let s_ids: BTreeSet<i64> = support::subset(&mut rng, &flat.ids(j), 0.5).into_iter().collect();
        let down = deproject(db, &flat.set(j, s_ids.iter().copied()), DimRef::Named(d), &flat.concepts[c].coll).unwrap();
        let want: BTreeSet<i64> =
            flat.ids(c).into_iter().filter(|i| flat.row(c, *i).refs[k].is_some_and(|r| s_ids.contains(&r))).collect();
        ensure!(ids_in(&flat, c, &down) == want, "seed {seed}: deproject");

        // filter
        let f = rng.gen_range(0..flat.concepts.len());
        let p = gen_pred(&mut rng, flat.concepts[f].dims.len(), 3);
        let q = format!("({} | {})", flat.concepts[f].coll, pred_text(&p));
        let Ok(Val::Set(got)) = eval_query(db, &q) else { return Err(format!("seed {seed}: {q}")) };
        let want: BTreeSet<i64> = flat.ids(f).into_iter().filter(|i| oracle_pred(&flat, f, *i, &p) == Some(true)).collect();
        ensure!(ids_in(&flat, f, &got) == want, "seed {seed}: filter {q}");

        // combine, SUM, COUNT
        let a: BTreeSet<i64> = support::subset(&mut rng, &flat.ids(f), 0.5).into_iter().collect();
        let b: BTreeSet<i64> = support::subset(&mut rng, &flat.ids(f), 0.5).into_iter().collect();
        let (sa, sb) = (flat.set(f, a.iter().copied()), flat.set(f, b.iter().copied()));
        ensure!(ids_in(&flat, f, &combine(&sa, &sb, true).unwrap()) == &a & &b, "seed {seed}: AND");
        ensure!(ids_in(&flat, f, &combine(&sa, &sb, false).unwrap()) == &a | &b, "seed {seed}: OR");
        let sum: i64 = a.iter().filter_map(|i| flat.row(f, *i).v).sum();
        ensure!(sum_path(db, &sa, &["v"]).unwrap() == Value::Int(sum), "seed {seed}: SUM");
        ensure!(count(&sa) == Value::Int(a.len() as i64), "seed {seed}: COUNT");
    }
    Ok("project, deproject, filter, combine, SUM and COUNT on 500 inputs each".into())
}

fn cube_contracts() -> Check {
    let mut with_where = 0;
    for seed in 1..=100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flat = support::random_flat(&mut rng, &FlatParams { max_rows: 6, ..Default::default() });
        let n = rng.gen_range(1..=3);
        let picks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..flat.concepts.len())).collect();
        let head = format!(
            "CUBE ({})",
            picks.iter().enumerate().map(|(i, c)| format!("{} x{i}", flat.concepts[*c].coll)).collect::<Vec<_>>().join(", ")
        );
        let bound = rng.gen_range(-40..90);
        let filtered = rng.gen_bool(0.5);
        let where_ = if filtered { format!(" WHERE x0.v > {bound}") } else { String::new() };
        let sizes: Vec<usize> = picks.iter().map(|c| flat.concepts[*c].rows.len()).collect();
        let expected = if filtered {
            with_where += 1;
            let first = flat.concepts[picks[0]].rows.iter().filter(|r| r.v.is_some_and(|v| v > bound)).count();
            first * sizes[1..].iter().product::<usize>()
        } else {
            sizes.iter().product()
        };
        let mut variants = vec![("RETURN (x0)".to_string(), 1)];
        if n >= 2 {
            variants.push((String::new(), n));
        }
        for _ in 0..3 {
            let len = rng.gen_range(1..=4);
            let items: Vec<String> = (0..len)
                .map(|i| match rng.gen_range(0..3) {
                    0 => format!("x{}", rng.gen_range(0..n)),
                    1 => format!("m{i} = x{}.v * 2", rng.gen_range(0..n)),
                    _ => format!("c{i} = COUNT(x{})", rng.gen_range(0..n)),
                })
                .collect();
            variants.push((format!("RETURN ({})", items.join(", ")), len));
        }
        for (ret, arity) in variants {
            let q = format!("{head}{where_} {ret}");
            let t = match eval_query(&flat.db, &q) {
                Ok(Val::Table(t)) => t,
                other => return Err(format!("seed {seed}: {q}: {other:?}")),
            };
            ensure!(t.columns.len() == arity, "seed {seed}: {q}: arity {}", t.columns.len());
            ensure!(t.rows.iter().all(|r| r.len() == arity), "seed {seed}: {q}: row width");
            ensure!(t.rows.len() == expected, "seed {seed}: {q}: {} rows, expected {expected}", t.rows.len());
        }
    }
    Ok(format!("100 cube queries ({with_where} with WHERE) keep arity and cardinality"))
}

const SHOP_CUBE: &str = "CUBE ( Countries co, Categories ca )
WHERE ( co <- country <- Customers > 0 )
BODY (
  cellGroup =
    co <- country <- customer <- order <- LineItems AND
    ca <- category <- product <- LineItems AND
    (Dates | year == 2007) <- LineItems
  totalPrice = SUM ( cellGroup.price )
  orderCount = COUNT ( cellGroup -> order )
)
RETURN co.code, ca.id, totalPrice, orderCount";

fn resolve(db: &Database, coll: &str, el: &conceptdb::Element, path: &[&str]) -> Value {
    match db.resolve_path(coll, el, path).unwrap() {
        Resolved::Value(v) => v,
        Resolved::Null => Value::Null,
        Resolved::Element { element, .. } => Value::Ref(element.identity.clone()),
    }
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Int(i) => *i as f64,
        Value::Double(d) => *d,
        _ => f64::NAN,
    }
}

fn shop_olap() -> Check {
    let s = fixture_session("shopdemo");
    let db = &s.db;
    // double loop over countries and categories, facts scanned per cell
    let mut want: Vec<(Value, Value, f64, i64)> = Vec::new();
    for co in db.collection("Countries").unwrap().elements() {
        let has_customers = db
            .collection("Customers")
            .unwrap()
            .elements()
            .any(|c| resolve(db, "Customers", c, &["country"]) == Value::Ref(co.identity.clone()));
        if !has_customers {
            continue;
        }
        for ca in db.collection("Categories").unwrap().elements() {
            let mut total = 0.0;
            let mut orders = BTreeSet::new();
            for li in db.collection("LineItems").unwrap().elements() {
                let in_cell = resolve(db, "LineItems", li, &["date", "year"]) == Value::Int(2007)
                    && resolve(db, "LineItems", li, &["order", "customer", "country"]) == Value::Ref(co.identity.clone())
                    && resolve(db, "LineItems", li, &["product", "category"]) == Value::Ref(ca.identity.clone());
                if in_cell {
                    total += num(&resolve(db, "LineItems", li, &["price"]));
                    orders.insert(resolve(db, "LineItems", li, &["order"]));
                }
            }
            let code = co.identity.last().values[0].clone();
            let id = ca.identity.last().values[0].clone();
            want.push((code, id, total, orders.len() as i64));
        }
    }
    let Val::Table(t) = support::eval(&s, SHOP_CUBE) else { return Err("not a table".into()) };
    let spec = OlapSpec {
        fact: "LineItems".into(),
        dimension_paths: vec![
            vec!["order".into(), "customer".into(), "country".into()],
            vec!["product".into(), "category".into()],
        ],
        levels: vec![
            Level { collection: "Countries".into(), filter: Some(parse_query("this <- country <- Customers > 0").unwrap()) },
            Level { collection: "Categories".into(), filter: None },
        ],
        fact_filter: Some(parse_query("date.year == 2007").unwrap()),
        measures: vec![
            ("totalPrice".into(), Measure::Sum(vec!["price".into()])),
            ("orderCount".into(), Measure::CountProject("order".into())),
        ],
    };
    let olap = olap_run(db, &spec).map_err(|e| e.to_string())?;
    ensure!(t.rows.len() == want.len(), "{} rows, expected {}", t.rows.len(), want.len());
    ensure!(olap.rows.len() == want.len(), "procedure: {} rows", olap.rows.len());
    for ((row, w), o) in t.rows.iter().zip(&want).zip(&olap.rows) {
        ensure!(row[0] == w.0 && row[1] == w.1, "cell order {row:?} vs {w:?}");
        let rel = (num(&row[2]) - w.2).abs() / w.2.abs().max(1.0);
        ensure!(rel <= 1e-9, "totalPrice {row:?} vs {w:?}");
        ensure!(row[3] == Value::Int(w.3), "orderCount {row:?} vs {w:?}");
        ensure!(o[2..] == row[2..], "procedure {o:?} vs {row:?}");
    }
    let filled = want.iter().filter(|w| w.3 > 0).count();
    Ok(format!("{} cells match row-for-row ({filled} non-empty)", want.len()))
}

fn parser_corpus() -> Check {
    let corpus = support::corpus();
    ensure!(corpus.len() >= 25, "corpus has {} statements", corpus.len());
    for text in &corpus {
        let a = parse_statement(text).map_err(|e| format!("{e}\n{text}"))?;
        let r1 = render_statement(&a);
        let b = parse_statement(&r1).map_err(|e| format!("re-parse: {e}\n{r1}"))?;
        ensure!(a.kind == b.kind, "round trip changed\n{text}");
        ensure!(render_statement(&b) == r1, "render is not stable\n{text}");
    }
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let exprs = support::ast_gen::expr();
    let stmts = support::ast_gen::statement();
    for _ in 0..1000 {
        let e = exprs.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let text = render_expr(&e);
        let back = parse_query(&text).map_err(|err| format!("{err}\n{text}"))?;
        ensure!(back == e, "expression round trip\n{text}");
        let st = stmts.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let text = render_statement(&st);
        let back = parse_statement(&text).map_err(|err| format!("{err}\n{text}"))?;
        ensure!(back.kind == st.kind, "statement round trip\n{text}");
    }
    Ok(format!("{} corpus statements; 1000 generated expressions and 1000 statements", corpus.len()))
}

fn schema_validation() -> Check {
    let int = || Domain::Primitive(PrimitiveType::Int);
    let c = |n: &str| Domain::Concept(n.into());
    let mut two = Schema::new();
    two.define_concept(Concept::new("A").identity("id", int()).entity("b", c("B"))).unwrap();
    two.define_concept(Concept::new("B").identity("id", int()).entity("a", c("A"))).unwrap();
    let report = two.validate().unwrap();
    ensure!(
        report.violations == vec![Violation::OrderCycle(vec!["A".into(), "B".into()])],
        "2-cycle: {:?}",
        report.violations
    );

    let mut selfref = Schema::new();
    selfref.define_concept(Concept::new("Dept").identity("id", int())).unwrap();
    selfref
        .define_concept(Concept::new("Employee").identity("id", int()).entity("boss", c("Employee")).entity("dept", c("Dept")))
        .unwrap();
    let report = selfref.validate().unwrap();
    ensure!(report.is_valid(), "self-reference rejected: {:?}", report.violations);
    ensure!(
        report.notes == vec![Note::SelfReference { concept: "Employee".into(), dimension: "boss".into() }],
        "notes {:?}",
        report.notes
    );
    let paths = selfref.dimension_paths("Employee", "Dept").unwrap();
    ensure!(paths == vec![vec!["dept".to_string()]], "paths {paths:?}");

    let s = fixture_session("bankdemo");
    let savings = s.db.all("SavingsAccounts").unwrap();
    ensure!(savings.iter().all(|id| id.segments().len() == 3), "segment counts");
    let printed: BTreeSet<String> = savings.iter().map(|id| id.to_string()).collect();
    ensure!(printed.contains("DEUTDEBBXXX/A1/S2"), "printed {printed:?}");
    ensure!(printed.iter().all(|p| p.split('/').count() == 3), "printed {printed:?}");
    Ok(format!("cycle rejected, self-reference noted and skipped, {} three-segment savings identities", savings.len()))
}

fn run_fixture_with_queries(name: &str) -> String {
    let dir = support::fixtures_dir().join(name);
    let mut text = fs::read_to_string(dir.join(format!("{name}.coql"))).unwrap();
    text.push('\n');
    text.push_str(&fs::read_to_string(dir.join("queries.coql")).unwrap());
    let mut s = Session::new();
    s.base_dir = dir;
    s.run_script(&text).render()
}

fn determinism() -> Check {
    let mut bytes = 0;
    for name in ["bankdemo", "shopdemo", "sportdemo"] {
        let s = fixture_session(name);
        let first = save_snapshot(&s.db);
        let loaded = load_snapshot(&first).map_err(|e| format!("{name}: {e}"))?;
        ensure!(save_snapshot(&loaded) == first, "{name}: snapshot differs after reload");
        for (a, b) in s.db.collections().zip(loaded.collections()) {
            ensure!(a.elements().eq(b.elements()), "{name}: {} differs", a.name);
        }
        let (x, y) = (run_fixture_with_queries(name), run_fixture_with_queries(name));
        ensure!(x == y, "{name}: script output differs between runs");
        bytes += x.len();
    }
    Ok(format!("3 snapshots byte-identical; {bytes} bytes of script output repeat exactly"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("projection and de-projection on the bank fixture", bank_projection),
        ("inference of related orders on the shop fixture", shop_inference),
        ("formal bottom with and without a constraint", sport_bottom),
        ("inference equals the explicit path composition", inference_paths),
        ("adjunction bounds of projection and de-projection", adjunction),
        ("operations match nested-loop oracles", oracles),
        ("cube arity and cardinality", cube_contracts),
        ("OLAP cube on the shop fixture against a double loop", shop_olap),
        ("parser corpus and generated round trips", parser_corpus),
        ("schema validation and three-segment identities", schema_validation),
        ("snapshot and script determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
