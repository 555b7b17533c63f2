/** Weight-gauge math: map current weight, session peak, and the closed-form
 * bound onto bar fractions of a fixed-width gauge.  The scale runs to the
 * larger of the bound and the peak so the bound marker always fits. */

import { Rat, cmp, max, toNumber } from "./rational.js";

export interface GaugeModel {
  /** 0..1 fill for current total weight */
  weightFrac: number;
  /** 0..1 position of the session-peak tick */
  peakFrac: number;
  /** 0..1 position of the bound marker, or null when no bound applies */
  boundFrac: number | null;
  /** true when the current weight exceeds the bound */
  overBound: boolean;
}

export function gaugeModel(weight: Rat, peak: Rat, bound: Rat | null): GaugeModel {
  let scale = max(peak, weight);
  if (bound) scale = max(scale, bound);
  const top = toNumber(scale);
  const denom = top > 0 ? top : 1;
  return {
    weightFrac: toNumber(weight) / denom,
    peakFrac: toNumber(peak) / denom,
    boundFrac: bound ? toNumber(bound) / denom : null,
    overBound: bound !== null && cmp(weight, bound) > 0,
  };
}
