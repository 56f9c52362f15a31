//! Scenario files (`.urt`): the floor grid, tagged objects, robot start,
//! calendar, forecast and condition map of one mission.
//!
//! ```text
//! grid <width> <height>
//! robot <x> <y>
//! floor <x> <y> <tag-id>
//! object <id> <Class> at <x> <y> [rank <n>] [tag <tag-id>] [payload "<text>"] [unavailable]
//! event <date> <title>
//! forecast <date> <condition>
//! forecast-file <path>
//! map <condition> -> <FunctionClass>
//! ```
//!
//! `grid` and `robot` are required and appear once. Floor cells without a
//! `floor` line carry the tag `floor-<x>-<y>`; objects without `tag` carry
//! `tag-<id>`. Inline `forecast` lines and `forecast-file` are exclusive.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::Serialize;

use super::error::{end_span, ParseError, ParseErrorKind, SourceSpan};
use super::forecast::{Forecast, ForecastBuilder};
use super::lexer::{lines, tokenize_words, Word};
use crate::grid::Cell;
use crate::kb::{is_identifier, Name};

/// Largest accepted grid side.
pub const MAX_GRID_SIDE: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectPlacement {
    pub id: Name,
    pub class: Name,
    pub cell: Cell,
    /// Higher is preferred among equally substantive candidates.
    pub rank: i64,
    pub tag_id: String,
    /// Manipulation hints carried opaquely.
    pub payload: String,
    pub available: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorldSpec {
    pub width: u32,
    pub height: u32,
    /// Explicit floor tags; every other cell uses [`default_floor_tag`].
    pub floor_tags: BTreeMap<Cell, String>,
    pub objects: Vec<ObjectPlacement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalendarEvent {
    pub date: String,
    pub title: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ForecastRef {
    Inline(Forecast),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub world: WorldSpec,
    pub robot_start: Cell,
    pub calendar_events: Vec<CalendarEvent>,
    pub forecast: ForecastRef,
    /// Condition string to function class, in file order.
    pub condition_map: Vec<(String, Name)>,
}

pub fn default_floor_tag(cell: Cell) -> String {
    format!("floor-{}-{}", cell.x, cell.y)
}

pub(crate) fn parse_default_floor_tag(tag: &str) -> Option<Cell> {
    let rest = tag.strip_prefix("floor-")?;
    let (x, y) = rest.split_once('-')?;
    let cell = Cell::new(x.parse().ok()?, y.parse().ok()?);
    // reject non-canonical spellings like "floor-01-2"
    (default_floor_tag(cell) == tag).then_some(cell)
}

impl Scenario {
    pub fn floor_tag(&self, cell: Cell) -> String {
        self.world.floor_tags.get(&cell).cloned().unwrap_or_else(|| default_floor_tag(cell))
    }

    /// Rewrites a relative `forecast-file` path against `base`.
    pub fn resolve_forecast_path(mut self, base: &std::path::Path) -> Scenario {
        if let ForecastRef::File(p) = &self.forecast {
            if p.is_relative() {
                self.forecast = ForecastRef::File(base.join(p));
            }
        }
        self
    }
}

struct Pending {
    grid: Option<(u32, u32, SourceSpan)>,
    robot: Option<(Cell, SourceSpan)>,
    floors: Vec<(Cell, String, SourceSpan, SourceSpan)>,
    objects: Vec<(ObjectPlacement, SourceSpan, SourceSpan)>,
    events: Vec<CalendarEvent>,
    inline_forecast: ForecastBuilder,
    forecast_file: Option<(PathBuf, SourceSpan)>,
    conditions: Vec<(String, Name)>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut p = Pending {
        grid: None,
        robot: None,
        floors: Vec::new(),
        objects: Vec::new(),
        events: Vec::new(),
        inline_forecast: ForecastBuilder::default(),
        forecast_file: None,
        conditions: Vec::new(),
    };
    for (line_no, line) in lines(text) {
        let words = tokenize_words(line_no, line)?;
        if words.is_empty() {
            continue;
        }
        let eol = SourceSpan::new(line_no, line.chars().count() + 1);
        let mut cur = Cursor { words: &words, pos: 1, eol };
        let head = &words[0];
        if head.quoted {
            return Err(ParseError::expecting(head.span, "unexpected string", DIRECTIVES));
        }
        match head.text.as_str() {
            "grid" => {
                let (w, _) = cur.number::<u32>("width")?;
                let (h, _) = cur.number::<u32>("height")?;
                cur.finish()?;
                if p.grid.is_some() {
                    return Err(ParseError::syntax(head.span, "grid given twice"));
                }
                if w == 0 || h == 0 || w > MAX_GRID_SIDE || h > MAX_GRID_SIDE {
                    return Err(ParseError::syntax(
                        words[1].span,
                        format!("grid sides must be between 1 and {MAX_GRID_SIDE}"),
                    ));
                }
                p.grid = Some((w, h, head.span));
            }
            "robot" => {
                let (cell, span) = cur.cell()?;
                cur.finish()?;
                if p.robot.is_some() {
                    return Err(ParseError::syntax(head.span, "robot given twice"));
                }
                p.robot = Some((cell, span));
            }
            "floor" => {
                let (cell, span) = cur.cell()?;
                let tag = cur.word("tag id")?;
                cur.finish()?;
                p.floors.push((cell, tag.text.clone(), span, tag.span));
            }
            "object" => {
                let (id, _) = cur.identifier("object id")?;
                let (class, _) = cur.identifier("class name")?;
                cur.keyword("at")?;
                let (cell, cell_span) = cur.cell()?;
                let mut placement = ObjectPlacement {
                    tag_id: format!("tag-{id}"),
                    id,
                    class,
                    cell,
                    rank: 0,
                    payload: String::new(),
                    available: true,
                };
                let mut tag_span = head.span;
                while let Some(opt) = cur.next() {
                    match (opt.quoted, opt.text.as_str()) {
                        (false, "rank") => placement.rank = cur.number::<i64>("rank")?.0,
                        (false, "tag") => {
                            let w = cur.word("tag id")?;
                            placement.tag_id = w.text.clone();
                            tag_span = w.span;
                        }
                        (false, "payload") => placement.payload = cur.word("payload")?.text.clone(),
                        (false, "unavailable") => placement.available = false,
                        _ => {
                            return Err(ParseError::expecting(
                                opt.span,
                                format!("unexpected `{}`", opt.text),
                                &["rank", "tag", "payload", "unavailable", "end of line"],
                            ))
                        }
                    }
                }
                p.objects.push((placement, cell_span, tag_span));
            }
            "event" => {
                let date = cur.word("date")?.text.clone();
                let title = cur.word("title")?.text.clone();
                cur.finish()?;
                p.events.push(CalendarEvent { date, title });
            }
            "forecast" => {
                let date = cur.word("date")?.clone();
                let condition = cur.word("condition")?.clone();
                cur.finish()?;
                p.inline_forecast.push(&date, &condition)?;
            }
            "forecast-file" => {
                let path = cur.word("path")?;
                cur.finish()?;
                if p.forecast_file.is_some() {
                    return Err(ParseError::syntax(head.span, "forecast-file given twice"));
                }
                p.forecast_file = Some((PathBuf::from(&path.text), head.span));
            }
            "map" => {
                let condition = cur.word("condition")?.clone();
                cur.keyword("->")?;
                let (function, _) = cur.identifier("function class")?;
                cur.finish()?;
                if p.conditions.iter().any(|(c, _)| *c == condition.text) {
                    return Err(ParseError::with_kind(
                        condition.span,
                        ParseErrorKind::DuplicateCondition,
                        format!("duplicate condition {}", condition.text),
                    ));
                }
                p.conditions.push((condition.text, function));
            }
            other => {
                return Err(ParseError::expecting(head.span, format!("unknown directive `{other}`"), DIRECTIVES));
            }
        }
    }
    validate(p, text)
}

const DIRECTIVES: &[&str] = &["grid", "robot", "floor", "object", "event", "forecast", "forecast-file", "map"];

fn validate(p: Pending, text: &str) -> Result<Scenario, ParseError> {
    let end = end_span(text);
    let (width, height, _) = p.grid.ok_or_else(|| ParseError::expecting(end, "missing grid", &["grid"]))?;
    let (robot_start, robot_span) = p.robot.ok_or_else(|| ParseError::expecting(end, "missing robot", &["robot"]))?;
    let out_of_bounds = |what: String, cell: Cell, span: SourceSpan| {
        ParseError::with_kind(
            span,
            ParseErrorKind::OutOfBounds,
            format!("{what} at {cell} is outside the {width}x{height} grid"),
        )
    };
    let inside = |c: Cell| c.x < width && c.y < height;
    if !inside(robot_start) {
        return Err(out_of_bounds("robot".into(), robot_start, robot_span));
    }

    let mut floor_tags = BTreeMap::new();
    let mut floor_ids: BTreeMap<String, Cell> = BTreeMap::new();
    for (cell, tag, cell_span, tag_span) in &p.floors {
        if !inside(*cell) {
            return Err(out_of_bounds(format!("floor tag {tag}"), *cell, *cell_span));
        }
        if floor_tags.insert(*cell, tag.clone()).is_some() {
            return Err(ParseError::syntax(*cell_span, format!("floor cell {cell} tagged twice")));
        }
        if floor_ids.insert(tag.clone(), *cell).is_some() {
            return Err(ParseError::syntax(*tag_span, format!("duplicate floor tag {tag}")));
        }
    }
    for (tag, cell) in &floor_ids {
        if let Some(other) = parse_default_floor_tag(tag) {
            if other != *cell && inside(other) && !floor_tags.contains_key(&other) {
                let span = p.floors.iter().find(|f| f.1 == *tag).map_or(end, |f| f.3);
                return Err(ParseError::syntax(
                    span,
                    format!("floor tag {tag} collides with the default tag of {other}"),
                ));
            }
        }
    }

    let mut ids = BTreeSet::new();
    let mut tags = BTreeSet::new();
    let mut cells: BTreeMap<Cell, Name> = BTreeMap::new();
    let mut objects = Vec::with_capacity(p.objects.len());
    for (obj, cell_span, tag_span) in p.objects {
        if !inside(obj.cell) {
            return Err(out_of_bounds(format!("object {}", obj.id), obj.cell, cell_span));
        }
        if !ids.insert(obj.id.clone()) {
            return Err(ParseError::syntax(cell_span, format!("object {} placed twice", obj.id)));
        }
        if !tags.insert(obj.tag_id.clone()) {
            return Err(ParseError::syntax(tag_span, format!("duplicate object tag {}", obj.tag_id)));
        }
        if let Some(other) = cells.insert(obj.cell, obj.id.clone()) {
            return Err(ParseError::syntax(
                cell_span,
                format!("object {} shares cell {} with {other}", obj.id, obj.cell),
            ));
        }
        objects.push(obj);
    }

    let forecast = match (p.forecast_file, p.inline_forecast.is_empty()) {
        (Some((_, span)), false) => {
            return Err(ParseError::syntax(span, "forecast-file cannot be combined with inline forecast lines"))
        }
        (Some((path, _)), true) => ForecastRef::File(path),
        (None, _) => ForecastRef::Inline(p.inline_forecast.finish()),
    };

    Ok(Scenario {
        world: WorldSpec { width, height, floor_tags, objects },
        robot_start,
        calendar_events: p.events,
        forecast,
        condition_map: p.conditions,
    })
}

struct Cursor<'w> {
    words: &'w [Word],
    pos: usize,
    eol: SourceSpan,
}

impl<'w> Cursor<'w> {
    fn next(&mut self) -> Option<&'w Word> {
        let w = self.words.get(self.pos)?;
        self.pos += 1;
        Some(w)
    }

    fn word(&mut self, what: &str) -> Result<&'w Word, ParseError> {
        let eol = self.eol;
        self.next().ok_or_else(|| ParseError::expecting(eol, format!("missing {what}"), &[what]))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let w = self.word(kw)?;
        if w.quoted || w.text != kw {
            return Err(ParseError::expecting(w.span, format!("unexpected `{}`", w.text), &[kw]));
        }
        Ok(())
    }

    fn identifier(&mut self, what: &str) -> Result<(Name, SourceSpan), ParseError> {
        let w = self.word(what)?;
        if w.quoted || !is_identifier(&w.text) || w.text.starts_with('_') {
            return Err(ParseError::expecting(w.span, format!("bad {what} `{}`", w.text), &["identifier"]));
        }
        Ok((Name::new(&w.text), w.span))
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<(T, SourceSpan), ParseError> {
        let w = self.word(what)?;
        match w.text.parse::<T>() {
            Ok(n) if !w.quoted => Ok((n, w.span)),
            _ => Err(ParseError::expecting(w.span, format!("bad {what} `{}`", w.text), &["integer"])),
        }
    }

    fn cell(&mut self) -> Result<(Cell, SourceSpan), ParseError> {
        let (x, span) = self.number::<u32>("x coordinate")?;
        let (y, _) = self.number::<u32>("y coordinate")?;
        Ok((Cell::new(x, y), span))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.next() {
            None => Ok(()),
            Some(w) => Err(ParseError::expecting(w.span, format!("unexpected `{}`", w.text), &["end of line"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "\
grid 5 5
object umbrella1 Umbrella at 1 1
robot 0 0
event 2010-06-01 leave-home
map rain -> RainwaterProtector
";

    #[test]
    fn basic_scenario() {
        let s = parse_scenario(BASIC).unwrap();
        assert_eq!((s.world.width, s.world.height), (5, 5));
        assert_eq!(s.world.objects.len(), 1);
        assert_eq!(s.world.objects[0].cell, Cell::new(1, 1));
        assert_eq!(s.world.objects[0].tag_id, "tag-umbrella1");
        assert_eq!(s.robot_start, Cell::new(0, 0));
        assert_eq!(s.calendar_events, vec![CalendarEvent { date: "2010-06-01".into(), title: "leave-home".into() }]);
        assert_eq!(s.condition_map, vec![("rain".to_string(), Name::new("RainwaterProtector"))]);
        assert_eq!(s.forecast, ForecastRef::Inline(Forecast::default()));
    }

    #[test]
    fn object_out_of_bounds() {
        let err = parse_scenario(&BASIC.replace("at 1 1", "at 9 9")).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::OutOfBounds);
        assert!(err.message.contains("umbrella1"), "{}", err.message);
        assert_eq!(err.span, SourceSpan::new(2, 30));
    }

    #[test]
    fn duplicate_condition() {
        let err = parse_scenario(&format!("{BASIC}map rain -> UVProtector\n")).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateCondition);
        assert_eq!(err.message, "duplicate condition rain");
    }

    #[test]
    fn object_options() {
        let s = parse_scenario(
            "grid 3 3\nrobot 0 0\nobject hat1 Hat at 2 2 rank 1 tag T-7 payload \"grip: brim\" unavailable\n",
        )
        .unwrap();
        let o = &s.world.objects[0];
        assert_eq!((o.rank, o.tag_id.as_str(), o.payload.as_str(), o.available), (1, "T-7", "grip: brim", false));
    }

    #[test]
    fn floor_tags_and_defaults() {
        let s = parse_scenario("grid 2 2\nrobot 1 1\nfloor 0 0 F-A\n").unwrap();
        assert_eq!(s.floor_tag(Cell::new(0, 0)), "F-A");
        assert_eq!(s.floor_tag(Cell::new(1, 1)), "floor-1-1");
        let err = parse_scenario("grid 2 2\nrobot 1 1\nfloor 0 0 floor-1-1\n").unwrap_err();
        assert!(err.message.contains("collides"));
    }

    #[test]
    fn inline_forecast_and_file_are_exclusive() {
        let s = parse_scenario("grid 1 1\nrobot 0 0\nforecast 2010-06-01 rain\n").unwrap();
        assert_eq!(s.forecast, ForecastRef::Inline(parse_forecast_text("2010-06-01 rain")));
        let s = parse_scenario("grid 1 1\nrobot 0 0\nforecast-file weather.fct\n").unwrap();
        assert_eq!(s.forecast, ForecastRef::File("weather.fct".into()));
        assert!(parse_scenario("grid 1 1\nrobot 0 0\nforecast-file w.fct\nforecast d rain\n").is_err());
    }

    fn parse_forecast_text(t: &str) -> Forecast {
        super::super::forecast::parse_forecast(t).unwrap()
    }

    #[test]
    fn required_and_unique_fields() {
        let err = parse_scenario("robot 0 0\n").unwrap_err();
        assert_eq!(err.message, "missing grid");
        assert!(parse_scenario("grid 2 2\n").is_err());
        assert!(parse_scenario("grid 0 2\nrobot 0 0").is_err());
        assert!(parse_scenario("grid 2 2\nrobot 0 0\nrobot 1 1").is_err());
        assert!(parse_scenario("grid 2 2\nrobot 0 0\nobject a A at 0 1\nobject b B at 0 1").is_err());
        assert!(parse_scenario("grid 2 2\nrobot 0 0\nobject a A at 0 1\nobject a B at 1 1").is_err());
        assert!(parse_scenario("grid 2 2\nrobot 0 0\nobject a A at 0 1 tag t\nobject b B at 1 1 tag t").is_err());
        let err = parse_scenario("grid 2 2\nrobot 5 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::OutOfBounds);
    }

    #[test]
    fn default_floor_tag_parsing() {
        assert_eq!(parse_default_floor_tag("floor-3-4"), Some(Cell::new(3, 4)));
        assert_eq!(parse_default_floor_tag("floor-03-4"), None);
        assert_eq!(parse_default_floor_tag("F-3-4"), None);
    }
}
