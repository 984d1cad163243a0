//! Published coefficient tables, stored verbatim as `p/q` strings over the
//! node offsets `-n..=n`.
//!
//! One entry differs from the printed source: the last `c_p` value of the
//! sixth-order optimized set is printed as `-4000637/13440000`, which breaks
//! both the zero-sum property and the moment conditions. The Taylor system
//! gives `-400637/13440000` (a dropped-digit typo), which is what is stored.

pub const ME4_OPTI_A: [&str; 7] = [
    "133/12500",
    "-27411/400000",
    "53929/240000",
    "-55387/40000",
    "53259/40000",
    "-154733/1200000",
    "6131/400000",
];

pub const ME4_OPTI_B: [&str; 7] = [
    "623/80000",
    "-4113/80000",
    "561/4000",
    "-3863/24000",
    "-15381/16000",
    "84387/80000",
    "-3503/120000",
];

pub const ME6_OPTI_A: [&str; 9] = [
    "-3/1250",
    "89141/4480000",
    "-49133/640000",
    "411173/1920000",
    "-174629/128000",
    "851641/640000",
    "-282149/1920000",
    "18413/640000",
    "-13877/4480000",
];

pub const ME6_OPTI_B: [&str; 9] = [
    "459/4480000",
    "-547/4480000",
    "-1289/640000",
    "2703/640000",
    "18379/384000",
    "-738047/640000",
    "742461/640000",
    "-820391/13440000",
    "9167/2240000",
];

pub const ME6_OPTI_C: [&str; 9] = [
    "-3377/2240000",
    "36157/4480000",
    "-6141/640000",
    "-20593/640000",
    "16367/128000",
    "-296029/1920000",
    "-618391/640000",
    "4737907/4480000",
    "-400637/13440000",
];

pub const ME4_INTERP_A: [&str; 7] = [
    "-83/384000",
    "1473/64000",
    "-21363/128000",
    "72409/96000",
    "49497/128000",
    "1129/64000",
    "-5567/384000",
];

pub const ME4_INTERP_B: [&str; 7] = [
    "811/128000",
    "-3151/64000",
    "4469/25600",
    "-2529/6400",
    "4661/5120",
    "23977/64000",
    "-2753/128000",
];

pub const ME4_FILTER_A: [&str; 7] = [
    "1/20",
    "-3/10",
    "3/4",
    "-1",
    "3/4",
    "-3/10",
    "1/20",
];

pub const ME4_FILTER_B: [&str; 7] = [
    "-1/2000",
    "3/1000",
    "-3/400",
    "1/100",
    "-3/400",
    "3/1000",
    "-1/2000",
];

pub const ME6_INTERP_A: [&str; 9] = [
    "-661/819200",
    "263/512000",
    "31573/1024000",
    "-91107/512000",
    "302761/409600",
    "43093/102400",
    "6429/1024000",
    "-12349/512000",
    "21511/4096000",
];

pub const ME6_INTERP_B: [&str; 9] = [
    "-7673/4096000",
    "9179/512000",
    "-15959/204800",
    "106337/512000",
    "-165879/409600",
    "456421/512000",
    "408037/1024000",
    "-3357/102400",
    "8279/4096000",
];

pub const ME6_INTERP_C: [&str; 9] = [
    "8279/4096000",
    "-10273/512000",
    "92869/1024000",
    "-126827/512000",
    "37877/81920",
    "-337743/512000",
    "1086701/1024000",
    "166763/512000",
    "-59769/4096000",
];

pub const ME6_FILTER_A: [&str; 9] = [
    "-13/1000",
    "13/125",
    "-91/250",
    "91/125",
    "-91/100",
    "91/125",
    "-91/250",
    "13/125",
    "-13/1000",
];

pub const ME6_FILTER_B: [&str; 9] = [
    "-1/2000",
    "1/250",
    "-7/500",
    "7/250",
    "-7/200",
    "7/250",
    "-7/500",
    "1/250",
    "-1/2000",
];

pub const ME6_FILTER_C: [&str; 9] = [
    "-1/2000",
    "1/250",
    "-7/500",
    "7/250",
    "-7/200",
    "7/250",
    "-7/500",
    "1/250",
    "-1/2000",
];
