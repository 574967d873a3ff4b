//! The rectangular evaluation grid behind `scatter --grid`.
//!
//! Spec format: `x0:x1:nx,y0:y1:ny,z0:z1:nz` — three axes, each a closed
//! range with a point count. A count of 1 collapses the axis to its lower
//! bound. Points are emitted with x as the outermost loop and z as the
//! innermost, so the file layout is fixed.

/// One axis of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub axes: [Axis; 3],
}

impl GridSpec {
    /// Total number of points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points, x outermost, z innermost.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let [ax, ay, az] = self.axes;
        let mut out = Vec::with_capacity(self.len());
        for ix in 0..ax.count {
            for iy in 0..ay.count {
                for iz in 0..az.count {
                    out.push([ax.value(ix), ay.value(iy), az.value(iz)]);
                }
            }
        }
        out
    }
}

/// Parses `x0:x1:nx,y0:y1:ny,z0:z1:nz`.
pub fn parse_grid(spec: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "grid spec needs 3 comma-separated axes (x0:x1:nx,y0:y1:ny,z0:z1:nz), got {}",
            parts.len()
        ));
    }
    let mut axes = [Axis {
        lo: 0.0,
        hi: 0.0,
        count: 0,
    }; 3];
    for (i, part) in parts.iter().enumerate() {
        let name = ["x", "y", "z"][i];
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(format!(
                "{name} axis: expected lo:hi:count, got {part:?}"
            ));
        }
        let lo: f64 = fields[0]
            .trim()
            .parse()
            .map_err(|_| format!("{name} axis: bad lower bound {:?}", fields[0]))?;
        let hi: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| format!("{name} axis: bad upper bound {:?}", fields[1]))?;
        let count: usize = fields[2]
            .trim()
            .parse()
            .map_err(|_| format!("{name} axis: bad point count {:?}", fields[2]))?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(format!("{name} axis: bounds must be finite"));
        }
        if count == 0 {
            return Err(format!("{name} axis: point count must be at least 1"));
        }
        if count > 1 && !(hi > lo) {
            return Err(format!(
                "{name} axis: upper bound must exceed lower bound for count > 1"
            ));
        }
        axes[i] = Axis { lo, hi, count };
    }
    Ok(GridSpec { axes })
}
