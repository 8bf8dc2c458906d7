export type Route =
  | { kind: 'landing' }
  | { kind: 'address'; address: string };

export function parseRoute(hash: string): Route {
  const match = /^#\/address\/([^/?#]+)$/.exec(hash);
  if (match) {
    return { kind: 'address', address: decodeURIComponent(match[1]) };
  }
  return { kind: 'landing' };
}

export function addressHash(address: string): string {
  return `#/address/${encodeURIComponent(address)}`;
}

export function navigateToAddress(address: string): void {
  window.location.hash = addressHash(address);
}

export function navigateHome(): void {
  window.location.hash = '#/';
}
