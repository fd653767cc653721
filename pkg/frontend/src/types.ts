// Mirrors of the API response bodies. The UI never derives these
// values itself: every number or span on screen comes from one field.

export interface PhraseView {
  phrase_id: string;
  text: string;
  case_sensitive: boolean;
  spell_variants: boolean;
  leet_variants: boolean;
  action: ActionName;
}

export type ActionName = "monitor" | "review" | "delete" | "block";

export const ACTIONS: ActionName[] = ["monitor", "review", "delete", "block"];

export interface CategoryView {
  category_id: string;
  name: string;
  shared: boolean;
  version: number;
  provenance: { kind: string; source_id?: string; snapshot_version?: number };
  created_at: string;
  phrases: PhraseView[];
}

export interface BuiltinView {
  builtin_id: string;
  name: string;
  description: string;
  authors: string;
  rule_count: number;
  example_rules: string[];
  import_count: number;
  version: number;
}

export type Span = [number, number];

export interface PreviewMatchView {
  comment_id: string;
  spans: Span[];
  already_caught: boolean;
  text: string;
  author_name: string;
  published_at: string | null;
  status: string | null;
}

export interface PreviewView {
  candidate_text: string;
  uncaught_count: number;
  total_matched: number;
  matches: PreviewMatchView[];
}

export interface SeriesBucket {
  day: string;
  count: number;
}

export interface SeriesView {
  key: string;
  label: string;
  total: number;
  buckets: SeriesBucket[];
}

export interface CommentView {
  comment_id: string;
  channel_id: string;
  video_id: string;
  author_id: string;
  author_name: string;
  text: string;
  published_at: string;
  fetched_at: string;
  status: string;
  author_blocked: boolean;
}

export interface PhraseSpans {
  phrase_id: string;
  text: string;
  spans: Span[];
}

export interface CommentRowView {
  comment: CommentView;
  caught_by: string[];
  phrase_spans: PhraseSpans[];
}

export interface CommentPageView {
  items: CommentRowView[];
  total: number;
  page: number;
  page_size: number;
}

export interface LoginView {
  token: string;
  owner_id: string;
  owner_name: string;
  expires_at: number;
}

export interface ApiError {
  error: string;
  message: string;
}
