/** Exact rationals on bigint, mirroring the engine's "p/q" wire strings. */

export interface Rat {
  readonly n: bigint;
  readonly d: bigint;
}

function gcd(a: bigint, b: bigint): bigint {
  a = a < 0n ? -a : a;
  b = b < 0n ? -b : b;
  while (b) {
    [a, b] = [b, a % b];
  }
  return a;
}

export function rat(n: bigint | number, d: bigint | number = 1n): Rat {
  let nn = BigInt(n);
  let dd = BigInt(d);
  if (dd === 0n) throw new Error("zero denominator");
  if (dd < 0n) {
    nn = -nn;
    dd = -dd;
  }
  const g = gcd(nn, dd) || 1n;
  return { n: nn / g, d: dd / g };
}

export const ZERO: Rat = rat(0n);
export const ONE: Rat = rat(1n);

const WIRE = /^\s*(-?\d+)(?:\/(\d+))?\s*$/;

/** Parse "p/q" or "p"; rejects anything else (floats never cross the wire). */
export function parseRat(text: string): Rat {
  const m = WIRE.exec(text);
  if (!m) throw new Error(`not a rational: ${JSON.stringify(text)}`);
  return rat(BigInt(m[1]), m[2] === undefined ? 1n : BigInt(m[2]));
}

export function formatRat(x: Rat): string {
  return x.d === 1n ? `${x.n}` : `${x.n}/${x.d}`;
}

export function add(a: Rat, b: Rat): Rat {
  return rat(a.n * b.d + b.n * a.d, a.d * b.d);
}

export function sub(a: Rat, b: Rat): Rat {
  return rat(a.n * b.d - b.n * a.d, a.d * b.d);
}

export function mulInt(a: Rat, k: bigint | number): Rat {
  return rat(a.n * BigInt(k), a.d);
}

/** -1, 0, or 1 as a < b, a = b, a > b. */
export function cmp(a: Rat, b: Rat): number {
  const left = a.n * b.d;
  const right = b.n * a.d;
  return left < right ? -1 : left > right ? 1 : 0;
}

export function eq(a: Rat, b: Rat): boolean {
  return cmp(a, b) === 0;
}

export function max(a: Rat, b: Rat): Rat {
  return cmp(a, b) >= 0 ? a : b;
}

export function toNumber(x: Rat): number {
  return Number(x.n) / Number(x.d);
}

/** All multiples g, 2g, ..., up to and including `limit` (for amount pickers). */
export function gridSteps(granularity: Rat, limit: Rat): Rat[] {
  const steps: Rat[] = [];
  let current = granularity;
  while (cmp(current, limit) <= 0) {
    steps.push(current);
    current = add(current, granularity);
  }
  return steps;
}
