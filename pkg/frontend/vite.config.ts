import { defineConfig } from "vitest/config";

// Dev server proxies /api to a locally running `zerog serve`.
export default defineConfig({
  server: {
    proxy: { "/api": "http://127.0.0.1:8000" },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
