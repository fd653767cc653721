// Debounced, stale-proof request driving for the live preview box.

export function debounce<A extends unknown[]>(fn: (...args: A) => void, delayMs: number) {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), delayMs);
  };
}

/**
 * Hands out monotonically increasing request ids; a response is applied
 * only when it belongs to the newest request, so slow responses for old
 * keystrokes can never overwrite fresh ones.
 */
export class LatestOnly {
  private counter = 0;

  issue(): number {
    return ++this.counter;
  }

  isCurrent(id: number): boolean {
    return id === this.counter;
  }
}
