//! Brute-force verification: group axioms on Cayley tables, the census of
//! distinct operation tables, and classification of untwisted schemes by
//! partition with element-order fingerprints.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::combinatorics::{
    count_additions_general, count_compositions, enumerate_compositions, enumerate_partitions,
    enumerate_twist_units, twist_count_for_composition,
};
use crate::digits::{dig_radix, Base, MAX_TEXT_BASE};
use crate::error::{Error, Result};
use crate::schemes::{
    AdditionScheme, AxiomReport, Composition, LatinDefect, OperationTable, TwistVector,
};

/// Checks every axiom exhaustively on the scheme's table.
pub fn check_group_axioms(scheme: &AdditionScheme, cap: usize) -> Result<AxiomReport> {
    Ok(check_table_axioms(&scheme.operation_table(cap)?))
}

/// Exhaustive axiom check. Every counterexample is the lexicographically
/// least failing tuple of labels.
pub fn check_table_axioms(table: &OperationTable) -> AxiomReport {
    let n = table.size();
    let latin_defect = latin_defect(table);
    let commutativity_counterexample = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| table.get(i, j) != table.get(j, i))
        .map(|(i, j)| (i as u32, j as u32));
    let associativity_counterexample = associativity_counterexample(table);
    let identity = (0..n).find(|&e| (0..n).all(|x| table.get(e, x) == x && table.get(x, e) == x));
    let inverse_counterexample = identity.and_then(|e| {
        (0..n).find(|&x| !(0..n).any(|y| table.get(x, y) == e && table.get(y, x) == e))
    });

    AxiomReport {
        element_count: n,
        latin_square: latin_defect.is_none(),
        latin_defect,
        commutative: commutativity_counterexample.is_none(),
        commutativity_counterexample,
        associative: associativity_counterexample.is_none(),
        associativity_counterexample,
        identity: identity.map(|e| e as u32),
        has_inverses: identity.is_some() && inverse_counterexample.is_none(),
        inverse_counterexample: inverse_counterexample.map(|x| x as u32),
    }
}

fn latin_defect(table: &OperationTable) -> Option<LatinDefect> {
    let n = table.size();
    let mut seen = vec![0u32; n];
    let mut stamp = 0u32;
    let mut is_permutation = |values: &mut dyn Iterator<Item = usize>| {
        stamp += 1;
        for v in values {
            if seen[v] == stamp {
                return false;
            }
            seen[v] = stamp;
        }
        true
    };
    if let Some(i) = (0..n).find(|&i| !is_permutation(&mut (0..n).map(|j| table.get(i, j)))) {
        return Some(LatinDefect::Row(i as u32));
    }
    (0..n)
        .find(|&j| !is_permutation(&mut (0..n).map(|i| table.get(i, j))))
        .map(|j| LatinDefect::Column(j as u32))
}

fn associativity_counterexample(table: &OperationTable) -> Option<(u32, u32, u32)> {
    let n = table.size();
    (0..n).into_par_iter().find_map_first(|x| {
        let row_x = table.row(x);
        for y in 0..n {
            let xy = row_x[y] as usize;
            let row_xy = table.row(xy);
            let row_y = table.row(y);
            for z in 0..n {
                if row_xy[z] != row_x[row_y[z] as usize] {
                    return Some((x as u32, y as u32, z as u32));
                }
            }
        }
        None
    })
}

/// Multiset of element orders: order -> number of elements of that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderProfile(BTreeMap<u64, u64>);

impl OrderProfile {
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }
}

impl std::fmt::Display for OrderProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Element orders of a group table. Rejects tables that are not groups.
pub fn order_profile(table: &OperationTable) -> Result<OrderProfile> {
    let report = check_table_axioms(table);
    if !report.associative {
        return Err(Error::NotAGroup("not associative".into()));
    }
    let e = report
        .identity
        .ok_or_else(|| Error::NotAGroup("no identity".into()))? as usize;
    if !report.has_inverses {
        return Err(Error::NotAGroup("missing inverses".into()));
    }
    let mut profile = BTreeMap::new();
    for x in 0..table.size() {
        let mut power = x;
        let mut order = 1u64;
        while power != e {
            power = table.get(power, x);
            order += 1;
        }
        *profile.entry(order).or_insert(0) += 1;
    }
    Ok(OrderProfile(profile))
}

/// Isomorphism class of an untwisted scheme: its parts sorted descending.
pub fn partition_of_scheme(scheme: &AdditionScheme) -> Result<Vec<usize>> {
    if scheme.is_twisted() {
        return Err(Error::TwistedScheme);
    }
    Ok(scheme.composition().to_partition())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionClass {
    pub partition: Vec<usize>,
    pub compositions: Vec<Composition>,
    pub profile: Option<OrderProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub base: u32,
    pub m: usize,
    pub classes: Vec<PartitionClass>,
    pub profiles_checked: bool,
}

impl Classification {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "classify b={} m={}", self.base, self.m);
        let _ = writeln!(out, "classes={}", self.classes.len());
        let _ = writeln!(
            out,
            "profiles={}",
            if self.profiles_checked {
                "checked"
            } else {
                "skipped"
            }
        );
        for class in &self.classes {
            let comps: Vec<String> = class
                .compositions
                .iter()
                .map(|c| format!("({c})"))
                .collect();
            let _ = write!(
                out,
                "partition={} compositions={} members={}",
                join(&class.partition),
                class.compositions.len(),
                comps.join(" ")
            );
            if let Some(profile) = &class.profile {
                let _ = write!(out, " orders={profile}");
            }
            out.push('\n');
        }
        out
    }
}

/// Groups every composition of `m` by partition. When `b^m <= profile_cap`
/// each scheme's order profile is computed; profiles must agree inside a
/// class and differ between classes.
pub fn classify_all(
    base: Base,
    m: usize,
    profile_cap: usize,
    budget: usize,
) -> Result<Classification> {
    let compositions = enumerate_compositions(m, budget)?;
    let profiles_checked = base.pow(m).is_some_and(|n| n <= profile_cap as u128);

    let profiles: Vec<Option<OrderProfile>> = if profiles_checked {
        compositions
            .iter()
            .map(|c| {
                let scheme = AdditionScheme::untwisted(base, c.clone())?;
                order_profile(&scheme.operation_table(profile_cap)?).map(Some)
            })
            .collect::<Result<_>>()?
    } else {
        vec![None; compositions.len()]
    };

    let mut classes: Vec<PartitionClass> = enumerate_partitions(m)
        .into_iter()
        .map(|partition| PartitionClass {
            partition,
            compositions: Vec::new(),
            profile: None,
        })
        .collect();
    let index: HashMap<Vec<usize>, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.partition.clone(), i))
        .collect();

    for (composition, profile) in compositions.into_iter().zip(profiles) {
        let class = &mut classes[index[&composition.to_partition()]];
        if let Some(profile) = profile {
            match &class.profile {
                None => class.profile = Some(profile),
                Some(existing) if *existing != profile => {
                    return Err(Error::FingerprintSplit(class.partition.clone()));
                }
                Some(_) => {}
            }
        }
        class.compositions.push(composition);
    }

    if profiles_checked {
        let mut seen: HashMap<&OrderProfile, &Vec<usize>> = HashMap::new();
        for class in &classes {
            let profile = class.profile.as_ref().expect("every class is inhabited");
            if let Some(other) = seen.insert(profile, &class.partition) {
                return Err(Error::FingerprintCollision(
                    other.clone(),
                    class.partition.clone(),
                ));
            }
        }
    }

    Ok(Classification {
        base: base.get(),
        m,
        classes,
        profiles_checked,
    })
}

/// How many enumerated schemes satisfied each axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomTallies {
    pub latin_square: u64,
    pub commutative: u64,
    pub associative: u64,
    pub identity: u64,
    pub inverses: u64,
    pub group: u64,
}

impl AxiomTallies {
    fn record(&mut self, r: &AxiomReport) {
        self.latin_square += r.latin_square as u64;
        self.commutative += r.commutative as u64;
        self.associative += r.associative as u64;
        self.identity += r.has_identity() as u64;
        self.inverses += r.has_inverses as u64;
        self.group += r.is_abelian_group() as u64;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub base: u32,
    pub m: usize,
    pub include_twists: bool,
    pub schemes_enumerated: u64,
    pub distinct_tables: u64,
    /// `2^{m-1}`
    pub expected_untwisted: BigUint,
    /// Closed-form count of composition and twist tuples.
    pub expected_with_twists: BigUint,
    pub tallies: AxiomTallies,
}

impl CensusReport {
    /// The prediction this census is measured against.
    pub fn expected(&self) -> &BigUint {
        if self.include_twists {
            &self.expected_with_twists
        } else {
            &self.expected_untwisted
        }
    }

    pub fn matches_expected(&self) -> bool {
        BigUint::from(self.distinct_tables) == *self.expected()
    }

    /// Line-oriented report with a fixed field order.
    pub fn render(&self) -> String {
        let t = &self.tallies;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "census b={} m={} twists={}",
            self.base,
            self.m,
            if self.include_twists { "yes" } else { "no" }
        );
        let _ = writeln!(out, "schemes={}", self.schemes_enumerated);
        let _ = writeln!(
            out,
            "distinct={} expected={}",
            self.distinct_tables,
            self.expected()
        );
        let _ = writeln!(out, "expected_untwisted={}", self.expected_untwisted);
        let _ = writeln!(out, "expected_with_twists={}", self.expected_with_twists);
        let _ = writeln!(
            out,
            "tally latin_square={} commutative={} associative={} identity={} inverses={} group={}",
            t.latin_square, t.commutative, t.associative, t.identity, t.inverses, t.group
        );
        let _ = writeln!(
            out,
            "verdict={}",
            if self.matches_expected() {
                "match"
            } else {
                "mismatch"
            }
        );
        out
    }
}

/// Every scheme for `(base, m)` in deterministic order: compositions in
/// box-counter order, twists in lexicographic order of ascending unit lists.
pub fn enumerate_schemes(
    base: Base,
    m: usize,
    include_twists: bool,
    budget: usize,
) -> Result<Vec<AdditionScheme>> {
    let compositions = enumerate_compositions(m, budget)?;
    if !include_twists {
        return compositions
            .into_iter()
            .map(|c| AdditionScheme::untwisted(base, c))
            .collect();
    }
    let total = count_additions_general(base, m);
    if total > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            required: u128::try_from(&total).unwrap_or(u128::MAX),
            budget,
        });
    }
    let mut schemes = Vec::new();
    for composition in compositions {
        let unit_lists = composition
            .parts()
            .iter()
            .map(|&t| enumerate_twist_units(base, t, budget))
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(
            unit_lists.iter().map(|l| l.len() as u64).product::<u64>(),
            u64::try_from(&twist_count_for_composition(base, &composition)).unwrap()
        );
        let mut cursor = vec![0usize; unit_lists.len()];
        loop {
            let units = cursor.iter().zip(&unit_lists).map(|(&k, l)| l[k]).collect();
            let twist = TwistVector::new(base, &composition, units)?;
            schemes.push(AdditionScheme::new(base, composition.clone(), twist)?);
            // odometer, last component fastest
            let mut pos = cursor.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < unit_lists[pos].len() {
                    break;
                }
                cursor[pos] = 0;
            }
            if cursor.iter().all(|&k| k == 0) {
                break;
            }
        }
    }
    Ok(schemes)
}

const CENSUS_CHUNK: usize = 64;

/// Materializes the table of every scheme and counts distinct tables by exact
/// equality on the labeled set.
pub fn census_distinct_tables(
    base: Base,
    m: usize,
    include_twists: bool,
    cap: usize,
    budget: usize,
) -> Result<CensusReport> {
    let elements = base.pow(m).ok_or(Error::TooLarge {
        base: base.get(),
        length: m,
    })?;
    if elements > cap as u128 {
        return Err(Error::CapExceeded { elements, cap });
    }
    let schemes = enumerate_schemes(base, m, include_twists, budget)?;

    // hash -> indices of representative schemes with that hash
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut distinct = 0u64;
    let mut tallies = AxiomTallies::default();

    for (chunk_no, chunk) in schemes.chunks(CENSUS_CHUNK).enumerate() {
        let results: Vec<(OperationTable, u64, AxiomReport)> = chunk
            .par_iter()
            .map(|s| {
                let table = s.operation_table(cap)?;
                let hash = table_hash(&table);
                let report = check_table_axioms(&table);
                Ok((table, hash, report))
            })
            .collect::<Result<_>>()?;
        for (offset, (table, hash, report)) in results.into_iter().enumerate() {
            tallies.record(&report);
            let index = chunk_no * CENSUS_CHUNK + offset;
            let reps = buckets.entry(hash).or_default();
            let mut duplicate = false;
            for &rep in reps.iter() {
                if schemes[rep].operation_table(cap)? == table {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                reps.push(index);
                distinct += 1;
            }
        }
    }

    Ok(CensusReport {
        base: base.get(),
        m,
        include_twists,
        schemes_enumerated: schemes.len() as u64,
        distinct_tables: distinct,
        expected_untwisted: count_compositions(m),
        expected_with_twists: count_additions_general(base, m),
        tallies,
    })
}

fn table_hash(table: &OperationTable) -> u64 {
    let mut h = DefaultHasher::new();
    table.entries().hash(&mut h);
    h.finish()
}

/// Renders a label as digit text when the base allows it, else as an integer.
fn label(scheme: &AdditionScheme, k: u32) -> String {
    if scheme.base().get() <= MAX_TEXT_BASE {
        if let Ok(v) = dig_radix(k as u128, scheme.base(), scheme.length()) {
            return v.to_text();
        }
    }
    k.to_string()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Line-oriented axiom report for one scheme.
pub fn render_axiom_report(scheme: &AdditionScheme, report: &AxiomReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "SCHEME: {scheme}");
    let _ = writeln!(out, "ELEMENTS: {}", report.element_count);
    let _ = match report.latin_defect {
        None => writeln!(out, "LATIN_SQUARE: yes"),
        Some(LatinDefect::Row(r)) => {
            writeln!(out, "LATIN_SQUARE: no (row {} repeats)", label(scheme, r))
        }
        Some(LatinDefect::Column(c)) => {
            writeln!(
                out,
                "LATIN_SQUARE: no (column {} repeats)",
                label(scheme, c)
            )
        }
    };
    let _ = match report.commutativity_counterexample {
        None => writeln!(out, "COMMUTATIVE: yes"),
        Some((x, y)) => writeln!(
            out,
            "COMMUTATIVE: no (counterexample {} {})",
            label(scheme, x),
            label(scheme, y)
        ),
    };
    let _ = match report.associativity_counterexample {
        None => writeln!(out, "ASSOCIATIVE: yes"),
        Some((x, y, z)) => writeln!(
            out,
            "ASSOCIATIVE: no (counterexample {} {} {})",
            label(scheme, x),
            label(scheme, y),
            label(scheme, z)
        ),
    };
    let _ = match report.identity {
        None => writeln!(out, "IDENTITY: none"),
        Some(e) => writeln!(out, "IDENTITY: {}", label(scheme, e)),
    };
    let _ = match report.inverse_counterexample {
        Some(x) => writeln!(out, "INVERSES: no (element {})", label(scheme, x)),
        None => writeln!(out, "INVERSES: {}", yes_no(report.has_inverses)),
    };
    let _ = writeln!(out, "GROUP: {}", yes_no(report.is_abelian_group()));
    out
}

fn join(items: &[usize]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
