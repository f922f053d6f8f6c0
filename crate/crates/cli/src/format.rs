//! Line-oriented instance files.
//!
//! ```text
//! rule: kapproval 2
//! metric: swap
//! alternatives: a b c x
//! target: x
//! budget: 10
//! voter: delta=2 price=1 : a > b > c > x
//! ```
//!
//! `#` starts a comment. `budget` defaults to 0 and voter keys to 0.

use std::fmt::Write;

use ldcb_core::{AlternativeSet, BriberyInstance, Metric, Preference, Profile, Ratio, ScoreVector, VotingRule};

use crate::CliError;

fn err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

pub fn parse_rule(text: &str) -> Result<VotingRule, String> {
    let mut it = text.split_whitespace();
    let name = it.next().ok_or("empty rule")?;
    let arg = it.next();
    if it.next().is_some() {
        return Err(format!("trailing input in rule `{text}`"));
    }
    let need = |what: &str| arg.ok_or_else(|| format!("rule `{name}` needs {what}"));
    let rule = match name {
        "plurality" => VotingRule::Plurality,
        "veto" => VotingRule::Veto,
        "borda" => VotingRule::Borda,
        "maximin" => VotingRule::Maximin,
        "bucklin" => VotingRule::Bucklin,
        "sbucklin" => VotingRule::SimplifiedBucklin,
        "kapproval" => VotingRule::KApproval(need("K")?.parse().map_err(|_| "K must be a positive integer")?),
        "positional" => {
            let alpha = need("a score vector")?
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad score `{s}`")))
                .collect::<Result<Vec<_>, _>>()?;
            VotingRule::Positional(ScoreVector::new(alpha).map_err(|e| e.to_string())?)
        }
        "copeland" => {
            let (p, q) = need("P/Q")?.split_once('/').ok_or("copeland parameter must be P/Q")?;
            let p = p.parse().map_err(|_| format!("bad numerator `{p}`"))?;
            let q = q.parse().map_err(|_| format!("bad denominator `{q}`"))?;
            VotingRule::Copeland(Ratio::new(p, q).map_err(|e| e.to_string())?)
        }
        other => return Err(format!("unknown rule `{other}`")),
    };
    if arg.is_some() && !matches!(rule, VotingRule::KApproval(_) | VotingRule::Positional(_) | VotingRule::Copeland(_)) {
        return Err(format!("rule `{name}` takes no argument"));
    }
    Ok(rule)
}

/// `a > b > c` with diagnostics that name the offending alternative.
pub fn parse_pref(alts: &AlternativeSet, text: &str) -> Result<Preference, String> {
    let mut seen = vec![false; alts.len()];
    let mut order = Vec::with_capacity(alts.len());
    for tok in text.split('>').map(str::trim) {
        let a = alts.index_of(tok).ok_or_else(|| format!("unknown alternative `{tok}`"))?;
        if std::mem::replace(&mut seen[a], true) {
            return Err(format!("alternative `{tok}` appears twice"));
        }
        order.push(a);
    }
    if let Some(a) = seen.iter().position(|s| !s) {
        return Err(format!("alternative `{}` is missing", alts.name(a)));
    }
    Preference::new(order).map_err(|e| e.to_string())
}

fn number<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| err(line, format!("`{key}` expects a non-negative integer, got `{}`", v.trim())))
}

pub fn parse_instance(text: &str) -> Result<BriberyInstance, CliError> {
    let mut rule = None;
    let mut metric = None;
    let mut alts: Option<AlternativeSet> = None;
    let mut target = None;
    let mut budget = None;
    let mut prefs = Vec::new();
    let mut deltas = Vec::new();
    let mut prices = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last = ln;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line.split_once(':').ok_or_else(|| err(ln, format!("expected `key: value`, got `{line}`")))?;
        let val = val.trim();
        let dup = |set: bool| if set { Err(err(ln, format!("duplicate `{key}` line"))) } else { Ok(()) };
        match key.trim() {
            "rule" => {
                dup(rule.is_some())?;
                rule = Some(parse_rule(val).map_err(|m| err(ln, m))?);
            }
            "metric" => {
                dup(metric.is_some())?;
                metric = Some(val.parse::<Metric>().map_err(|e| err(ln, e.to_string()))?);
            }
            "alternatives" => {
                dup(alts.is_some())?;
                alts = Some(AlternativeSet::new(val.split_whitespace()).map_err(|e| err(ln, e.to_string()))?);
            }
            "target" => {
                dup(target.is_some())?;
                target = Some((ln, val.to_string()));
            }
            "budget" => {
                dup(budget.is_some())?;
                budget = Some(number::<u64>(ln, "budget", val)?);
            }
            "voter" => {
                let alts = alts.as_ref().ok_or_else(|| err(ln, "`voter` before `alternatives`"))?;
                let (opts, pref) =
                    val.split_once(':').ok_or_else(|| err(ln, "voter line needs `key=value ... : a > b > ...`"))?;
                let (mut delta, mut price) = (0u64, 0u64);
                for kv in opts.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("delta", v)) => delta = number(ln, "delta", v)?,
                        Some(("price", v)) => price = number(ln, "price", v)?,
                        _ => return Err(err(ln, format!("unknown voter option `{kv}`"))),
                    }
                }
                prefs.push(parse_pref(alts, pref).map_err(|m| err(ln, m))?);
                deltas.push(delta);
                prices.push(price);
            }
            other => return Err(err(ln, format!("unknown key `{other}`"))),
        }
    }
    let missing = |what: &str| err(last, format!("missing `{what}` line"));
    let alts = alts.ok_or_else(|| missing("alternatives"))?;
    let (tl, tname) = target.ok_or_else(|| missing("target"))?;
    let target = alts.index_of(&tname).ok_or_else(|| err(tl, format!("unknown target `{tname}`")))?;
    let rule = rule.ok_or_else(|| missing("rule"))?;
    let metric = metric.ok_or_else(|| missing("metric"))?;
    let profile = Profile::new(alts, prefs).map_err(|e| err(last, e.to_string()))?;
    let inst = BriberyInstance { profile, target, deltas, prices, budget: budget.unwrap_or(0), rule, metric };
    inst.validate().map_err(|e| err(last, e.to_string()))?;
    Ok(inst)
}

pub fn render_pref(alts: &AlternativeSet, p: &Preference) -> String {
    p.display(alts).to_string()
}

/// Canonical form: fixed key order, single spaces, every voter key written.
pub fn render_instance(inst: &BriberyInstance) -> String {
    let alts = inst.profile.alternatives();
    let mut s = String::new();
    writeln!(s, "rule: {}", inst.rule).unwrap();
    writeln!(s, "metric: {}", inst.metric).unwrap();
    writeln!(s, "alternatives: {}", alts.names().join(" ")).unwrap();
    writeln!(s, "target: {}", alts.name(inst.target)).unwrap();
    writeln!(s, "budget: {}", inst.budget).unwrap();
    for (i, p) in inst.profile.prefs().iter().enumerate() {
        writeln!(s, "voter: delta={} price={} : {}", inst.deltas[i], inst.prices[i], render_pref(alts, p)).unwrap();
    }
    s
}
