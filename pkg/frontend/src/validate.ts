// Client-side validation covers only the length/hex shape; checksum
// verdicts come from the server, which is the single source of truth.

const ADDRESS_SHAPE = /^0x[0-9a-fA-F]{40}$/;

export function normalizeInput(raw: string): string {
  return raw.trim();
}

export function validateAddressInput(raw: string): string | null {
  const input = normalizeInput(raw);
  if (input.length === 0) {
    return 'Enter an address to look up.';
  }
  if (!input.startsWith('0x')) {
    return 'Addresses start with 0x.';
  }
  if (input.length !== 42) {
    return `Expected 42 characters, got ${input.length}.`;
  }
  if (!ADDRESS_SHAPE.test(input)) {
    return 'Addresses contain only hex characters (0-9, a-f).';
  }
  return null;
}

export function isAddressShaped(raw: string): boolean {
  return validateAddressInput(raw) === null;
}
