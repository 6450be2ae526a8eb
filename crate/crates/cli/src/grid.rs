use std::str::FromStr;

/// Strictly increasing list of grid points, parsed from `start:stop:count`
/// or a comma-separated list.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl Grid {
    pub fn linspace(start: f64, stop: f64, count: usize) -> Self {
        if count == 1 {
            return Grid(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
        // pin the end point against accumulated rounding
        points[count - 1] = stop;
        Grid(points)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| format!("not a number: {t:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: {t:?}"))
            }
        };
        let grid = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, count] = parts.as_slice() else {
                return Err(format!("expected start:stop:count, got {s:?}"));
            };
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("count must be a positive integer, got {count:?}"))?;
            if count == 0 {
                return Err("count must be at least 1".into());
            }
            let (start, stop) = (num(start)?, num(stop)?);
            if count > 1 && stop <= start {
                return Err(format!(
                    "grid must be strictly increasing: {start} >= {stop}"
                ));
            }
            Grid::linspace(start, stop, count)
        } else {
            Grid(s.split(',').map(num).collect::<Result<_, _>>()?)
        };
        if grid.0.is_empty() {
            return Err("empty grid".into());
        }
        if let Some(w) = grid.0.windows(2).find(|w| w[1] <= w[0]) {
            return Err(format!(
                "grid must be strictly increasing: {} then {}",
                w[0], w[1]
            ));
        }
        Ok(grid)
    }
}
