import { vi } from "vitest";
import type {
  CommentPageView,
  CommentRowView,
  PreviewView,
  SeriesView,
} from "../src/types";

export type RouteTable = Record<string, unknown | ((url: string, init?: RequestInit) => unknown)>;

/**
 * Installs a fetch mock. Keys are "METHOD path-prefix"; the first match
 * (longest prefix wins) supplies the JSON body. Records every call.
 */
export function mockFetch(routes: RouteTable): { calls: { method: string; url: string }[] } {
  const calls: { method: string; url: string }[] = [];
  const entries = Object.entries(routes).sort((a, b) => b[0].length - a[0].length);
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      const method = init?.method ?? "GET";
      calls.push({ method, url });
      for (const [key, value] of entries) {
        const [routeMethod, prefix] = key.split(" ", 2);
        if (routeMethod === method && url.split("?")[0].startsWith(prefix)) {
          const body = typeof value === "function" ? (value as any)(url, init) : value;
          return new Response(JSON.stringify(body), {
            status: 200,
            headers: { "Content-Type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ error: "NotFound", message: url }), { status: 404 });
    }),
  );
  return { calls };
}

export function flush(ms = 0): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export const SERIES_FIXTURE: SeriesView[] = [
  {
    key: "c1",
    label: "Misogyny",
    total: 6,
    buckets: Array.from({ length: 30 }, (_, i) => ({
      day: `2024-03-${String(i + 1).padStart(2, "0")}`,
      count: i === 5 ? 4 : i === 20 ? 2 : 0,
    })),
  },
  {
    key: "c2",
    label: "Islamophobia",
    total: 3,
    buckets: Array.from({ length: 30 }, (_, i) => ({
      day: `2024-03-${String(i + 1).padStart(2, "0")}`,
      count: i === 10 ? 3 : 0,
    })),
  },
];

export function commentRow(id: string, text: string, caughtBy: string[], spans: [number, number][]): CommentRowView {
  return {
    comment: {
      comment_id: id,
      channel_id: "chan",
      video_id: "v",
      author_id: `a-${id}`,
      author_name: `author-${id}`,
      text,
      published_at: "2024-03-05T10:00:00+00:00",
      fetched_at: "2024-03-05T10:00:00+00:00",
      status: "visible",
      author_blocked: false,
    },
    caught_by: caughtBy,
    phrase_spans: spans.length ? [{ phrase_id: "p1", text: "ugly", spans }] : [],
  };
}

export const COMMENTS_FIXTURE: CommentPageView = {
  items: [
    commentRow("cm1", "you are ugly", ["Misogyny"], [[8, 12]]),
    commentRow("cm2", "nice video", [], []),
  ],
  total: 2,
  page: 1,
  page_size: 25,
};

export const PREVIEW_FIXTURE: PreviewView = {
  candidate_text: "ugly",
  uncaught_count: 2,
  total_matched: 3,
  matches: [
    {
      comment_id: "cm1",
      spans: [[8, 12]],
      already_caught: false,
      text: "you are ugly",
      author_name: "hater",
      published_at: "2024-03-05T10:00:00+00:00",
      status: "visible",
    },
    {
      comment_id: "cm2",
      spans: [[0, 6]],
      already_caught: false,
      text: "uggly thing",
      author_name: "meanie",
      published_at: "2024-03-04T10:00:00+00:00",
      status: "visible",
    },
    {
      comment_id: "cm3",
      spans: [[5, 9]],
      already_caught: true,
      text: "very ugly and fat",
      author_name: "troll",
      published_at: "2024-03-03T10:00:00+00:00",
      status: "visible",
    },
  ],
};
