// Display helpers. Amounts arrive as server-formatted strings and are
// never recomputed here: no floating point ever touches raw wei.

const UNITS: Array<[seconds: number, label: string]> = [
  [365 * 24 * 3600, 'year'],
  [30 * 24 * 3600, 'month'],
  [7 * 24 * 3600, 'week'],
  [24 * 3600, 'day'],
  [3600, 'hour'],
  [60, 'minute'],
];

export function relativeTime(epochSeconds: number, nowMs: number = Date.now()): string {
  const delta = Math.floor(nowMs / 1000) - epochSeconds;
  if (delta < 0) {
    return 'in the future';
  }
  for (const [size, label] of UNITS) {
    if (delta >= size) {
      const count = Math.floor(delta / size);
      return `${count} ${label}${count === 1 ? '' : 's'} ago`;
    }
  }
  return 'moments ago';
}

export function absoluteTime(epochSeconds: number): string {
  return new Date(epochSeconds * 1000).toISOString().replace('T', ' ').slice(0, 19) + ' UTC';
}

export function shortAddress(address: string): string {
  if (address.length <= 14) {
    return address;
  }
  return `${address.slice(0, 8)}…${address.slice(-4)}`;
}

export function trimEth(eth: string): string {
  // "3.140000000000000000" -> "3.14", "0.000000000000000001" unchanged
  if (!eth.includes('.')) {
    return eth;
  }
  const trimmed = eth.replace(/0+$/, '');
  return trimmed.endsWith('.') ? trimmed + '0' : trimmed;
}
