//! Versioned column layouts of every results table.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: &'static str,
    pub version: u32,
    pub header: &'static str,
}

impl Schema {
    pub fn tag(&self) -> String {
        format!("{}/{}", self.name, self.version)
    }
}

pub const VOLUMES: Schema = Schema { name: "volumes", version: 1, header: "body,j,value,method,error" };
pub const LP_SUM: Schema =
    Schema { name: "lp-sum", version: 1, header: "x,y,z,h_left,h_right,p_mean,h_combination" };
pub const CHECK_LPBM: Schema = Schema {
    name: "check-lpbm",
    version: 1,
    header: "n,j,p,lambda,lhs,rhs_geo,rhs_p,margin_geo,margin_p,strict_violation",
};
pub const COUNTEREXAMPLE: Schema =
    Schema { name: "counterexample", version: 1, header: "s,lhs,rhs,margin,strict_violation" };
pub const SPECTRUM: Schema = Schema { name: "spectrum", version: 1, header: "kind,index,value" };
pub const SECOND_DERIVATIVE: Schema = Schema {
    name: "second-derivative",
    version: 1,
    header: "p,sample,finite_difference,spectral,discrepancy",
};
pub const SOLVE_CM: Schema =
    Schema { name: "solve-cm", version: 1, header: "iteration,residual,step,min_radius,reference_operator" };
pub const IVAKI_MILMAN: Schema = Schema { name: "ivaki-milman", version: 1, header: "p,c,lhs,rhs,holds" };
pub const STEINER_CHECK: Schema =
    Schema { name: "steiner-check", version: 1, header: "rho,parallel_volume,steiner_polynomial,relative_gap" };

pub const ALL: [Schema; 9] =
    [VOLUMES, LP_SUM, CHECK_LPBM, COUNTEREXAMPLE, SPECTRUM, SECOND_DERIVATIVE, SOLVE_CM, IVAKI_MILMAN, STEINER_CHECK];
