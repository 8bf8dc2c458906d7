// API base resolution order: runtime override (tests), build-time env,
// same-origin default for a dev proxy setup.

declare global {
  // eslint-disable-next-line no-var
  var __CHAINTRACE_API_BASE__: string | undefined;
}

export const SUGGESTION_COUNT = Number(import.meta.env?.VITE_SUGGESTION_COUNT ?? 4);
export const TOP_COUNT = 3;

export function apiBase(): string {
  if (typeof globalThis.__CHAINTRACE_API_BASE__ === 'string') {
    return globalThis.__CHAINTRACE_API_BASE__;
  }
  const fromEnv = import.meta.env?.VITE_API_BASE;
  if (typeof fromEnv === 'string' && fromEnv.length > 0) {
    return fromEnv;
  }
  return 'http://127.0.0.1:8000';
}
