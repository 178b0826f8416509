// splitmix64, matching the server engine draw for draw. The server hands out
// a u64 seed per firework; with the same seed both sides produce identical
// random sequences, which is what makes client-side simulation possible.

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;

export class SplitMix64 {
  private state: bigint;

  constructor(seed: bigint) {
    this.state = seed & MASK64;
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    return z ^ (z >> 31n);
  }

  /** float64 in [0, 1): the top 53 bits, exactly as the server maps them. */
  random(): number {
    return Number(this.nextU64() >> 11n) * 2 ** -53;
  }

  uniform(lo: number, hi: number): number {
    return lo + this.random() * (hi - lo);
  }
}
