//! Taylor coefficients of the three-level Bures φ-marginal about φ = 0.
//!
//! The closed form carries `cot φ csc⁸ φ` against a bracket that vanishes to
//! ninth order at φ = 0, so it cannot be evaluated in double precision near the
//! ends of `[0, π]`. These coefficients come from an exact symbolic expansion
//! of the same closed form (with `arctan(cot(φ/2)) = (π - φ)/2`); the constant
//! term is `20 / (9π)`.

pub(super) const PHI_MARGINAL_TAYLOR: [f64; 48] = [
    0.70735530263064593675,
    0.0,
    -6.3919197346805641921,
    17.500000000000000000,
    -18.777397802839911555,
    8.7500000000000000000,
    -2.3009547998113027205,
    1.5312500000000000000,
    -0.71992016230496259825,
    -0.29803240740740740741,
    0.46891376763676069183,
    -0.30530960648148148148,
    0.19628852159355720409,
    -0.12712081755050505051,
    0.073543696705912531629,
    -0.039277102543161570939,
    0.020318915110428942244,
    -0.010219984932441529664,
    0.0049803447810532633367,
    -0.0023637679827429218939,
    0.0010982692877186210000,
    -0.00050067121687615929505,
    0.00022432691645183160670,
    -0.000098963851335825944629,
    0.000043052785579381249761,
    -0.000018492372608512512951,
    7.8508094529007618818e-6,
    -3.2974228083487428050e-6,
    1.3712946889923043643e-6,
    -5.6506442682376854709e-7,
    2.3086392033885574847e-7,
    -9.3573993698949870402e-8,
    3.7646075696251973172e-8,
    -1.5040145739123074044e-8,
    5.9694639027758518237e-9,
    -2.3547022176772600132e-9,
    9.2343379432247412291e-10,
    -3.6015000064685627409e-10,
    1.3973212345654414547e-10,
    -5.3946263747094067007e-11,
    2.0729400013361552897e-11,
    -7.9299810271897273622e-12,
    3.0207172995440148764e-12,
    -1.1460046390795580802e-12,
    4.3309271248989377777e-13,
    -1.6306772008991004597e-13,
    6.1181091272774545318e-14,
    -2.2876706761946209273e-14,
];
