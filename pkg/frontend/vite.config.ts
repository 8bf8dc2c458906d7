import { defineConfig } from 'vite';

export default defineConfig({
  test: {
    environment: 'jsdom',
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
} as Parameters<typeof defineConfig>[0]);
