use std::str::FromStr;

use chrono::{DateTime, NaiveDate};
use once_cell::sync::Lazy;
use regex::Regex;

use crate::model::RecordDates;

/// How to read an ambiguous `NN/NN/YYYY` date.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DateOrder {
    #[default]
    MonthFirst,
    DayFirst,
}

impl FromStr for DateOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "month-first" => Ok(DateOrder::MonthFirst),
            "day-first" => Ok(DateOrder::DayFirst),
            other => Err(format!("date order must be month-first or day-first, got {other:?}")),
        }
    }
}

const MIN_YEAR: i32 = 1000;
const MAX_YEAR: i32 = 9999;

static ISO: Lazy<Regex> = Lazy::new(|| {
    Regex::new(r"^(\d{4})-(\d{2})-(\d{2})(?:[T ]\d{2}:\d{2}(?::\d{2}(?:[.,]\d+)?)?\s*(?:[zZ]|[+-]\d{2}(?::?\d{2})?)?)?$")
        .unwrap()
});
static YEAR_MONTH: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(\d{4})-(\d{1,2})$").unwrap());
static YEAR: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(\d{4})$").unwrap());
static YMD_SLASH: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(\d{4})/(\d{1,2})/(\d{1,2})$").unwrap());
static SLASHED: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(\d{1,2})/(\d{1,2})/(\d{4})$").unwrap());
static DOTTED: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(\d{1,2})\.(\d{1,2})\.(\d{4})$").unwrap());
const TIME_TAIL: &str = r"(?:\s+\d{1,2}:\d{2}(?::\d{2})?(?:\s*[a-z]{1,5}|\s*[+-]\d{4})?)?";
static DAY_MONTH_YEAR: Lazy<Regex> = Lazy::new(|| {
    Regex::new(&format!(r"^(?:[a-z]+\.?,?\s+)?(\d{{1,2}})(?:st|nd|rd|th)?[\s-]+([a-z]+)\.?,?[\s-]+(\d{{4}}){TIME_TAIL}$")).unwrap()
});
static MONTH_DAY_YEAR: Lazy<Regex> = Lazy::new(|| {
    Regex::new(&format!(r"^(?:[a-z]+\.?,?\s+)?([a-z]+)\.?\s+(\d{{1,2}})(?:st|nd|rd|th)?,?\s+(\d{{4}}){TIME_TAIL}$")).unwrap()
});
static MONTH_YEAR: Lazy<Regex> = Lazy::new(|| Regex::new(r"^([a-z]+)\.?,?\s+(\d{4})$").unwrap());

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

fn month_number(name: &str) -> Option<u32> {
    MONTHS
        .iter()
        .position(|m| *m == name || (name.len() >= 3 && m.starts_with(name) && (name.len() == 3 || name == "sept")))
        .map(|i| i as u32 + 1)
}

fn ymd(y: &str, m: &str, d: &str) -> Option<NaiveDate> {
    let year: i32 = y.parse().ok()?;
    if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
        return None;
    }
    NaiveDate::from_ymd_opt(year, m.parse().ok()?, d.parse().ok()?)
}

fn ymd_month(y: &str, month: u32, d: &str) -> Option<NaiveDate> {
    ymd(y, &month.to_string(), d)
}

/// Parses a date with ambiguous slashed dates read month-first.
pub fn parse_date(raw: &str) -> Option<NaiveDate> {
    parse_date_with(raw, DateOrder::MonthFirst)
}

pub fn parse_date_with(raw: &str, order: DateOrder) -> Option<NaiveDate> {
    let s = raw.trim();
    if s.is_empty() || s.len() > 64 {
        return None;
    }
    if let Some(c) = ISO.captures(s) {
        return ymd(&c[1], &c[2], &c[3]);
    }
    if let Some(c) = YEAR_MONTH.captures(s) {
        return ymd(&c[1], &c[2], "1");
    }
    if let Some(c) = YEAR.captures(s) {
        return ymd(&c[1], "1", "1");
    }
    if let Some(c) = YMD_SLASH.captures(s) {
        return ymd(&c[1], &c[2], &c[3]);
    }
    if let Some(c) = SLASHED.captures(s) {
        let (a, b) = (&c[1], &c[2]);
        let first: u32 = a.parse().ok()?;
        let second: u32 = b.parse().ok()?;
        let month_first = match order {
            DateOrder::MonthFirst => first <= 12,
            DateOrder::DayFirst => second > 12,
        };
        return if month_first { ymd(&c[3], a, b) } else { ymd(&c[3], b, a) };
    }
    if let Some(c) = DOTTED.captures(s) {
        return ymd(&c[3], &c[2], &c[1]);
    }
    if let Ok(dt) = DateTime::parse_from_rfc2822(s) {
        let d = dt.date_naive();
        return ymd(&d.format("%Y").to_string(), &d.format("%m").to_string(), &d.format("%d").to_string());
    }
    let lower = s.to_lowercase();
    if let Some(c) = MONTH_DAY_YEAR.captures(&lower) {
        if let Some(m) = month_number(&c[1]) {
            return ymd_month(&c[3], m, &c[2]);
        }
    }
    if let Some(c) = DAY_MONTH_YEAR.captures(&lower) {
        if let Some(m) = month_number(&c[2]) {
            return ymd_month(&c[3], m, &c[1]);
        }
    }
    if let Some(c) = MONTH_YEAR.captures(&lower) {
        if let Some(m) = month_number(&c[1]) {
            return ymd_month(&c[2], m, "1");
        }
    }
    None
}

/// Latest metadata date, else the page's own modification date.
pub fn resolve_last_updated(dates: &RecordDates) -> Option<NaiveDate> {
    [dates.created, dates.published, dates.modified]
        .into_iter()
        .flatten()
        .max()
        .or(dates.page_modified)
}
