import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "./",
  server: {
    proxy: {
      // dev convenience: same-origin API calls land on a local modkit serve
      "^/(login|categories|phrases|preview|builtins|analytics|comments|ingest).*": {
        target: "http://127.0.0.1:8080",
        changeOrigin: true,
      },
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
