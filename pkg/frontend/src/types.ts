// Payload shapes of the engine's HTTP API. The engine is the single source of
// truth for every number here; the UI only transports and formats them.

export interface Decl {
    id: string
    label?: string
}

export interface FlaggedDecl extends Decl {
    binary: boolean
}

export interface HistoryAspectDecl extends Decl {
    undiagnosed: boolean
}

export interface ObservableDecl {
    id: string
    graded: boolean
}

export interface ProfileSubsets {
    location?: string[]
    longevity?: string[]
    continuity?: string[]
    intermittency?: string[]
    severity?: string[]
}

export interface ProblemDecl extends Decl {
    profile: ProfileSubsets
}

export interface MembershipDoc {
    breakpoints: [number, number][]
    below?: number
    above?: number
}

export interface TestAspectDoc {
    id: string
    abnormality: MembershipDoc
}

export interface TestDecl extends Decl {
    abnormality?: MembershipDoc
    aspects?: TestAspectDoc[]
    combine?: { kind: string; weights?: number[] }
}

export interface KbDocument {
    alpha: number
    diseases: Decl[]
    history_aspects: HistoryAspectDecl[]
    past_symptoms: Record<string, { symptoms: Record<string, number>; alpha?: number }>
    problems: ProblemDecl[]
    symptoms: FlaggedDecl[]
    signs: FlaggedDecl[]
    observables: Record<string, ObservableDecl[]>
    tests: TestDecl[]
}

export interface KbOverview {
    alpha: number
    counts: Record<string, number>
    kb: KbDocument
}

export interface MatricesDoc {
    alpha: number
    history: { aspects: string[]; entries: number[]; split: number }
    symptoms: { ids: string[]; grades: number[] }
    signs: { ids: string[]; grades: number[] }
    tests: { declared: string[]; grades: Record<string, number> }
    unanswered: {
        history_aspects: string[]
        problems: string[]
        signs: string[]
        tests: string[]
    }
}

export type Finding =
    | { kind: 'direct_history'; aspect: string; value: 0 | 1 }
    | { kind: 'recalled_past_symptoms'; disease: string; symptoms: string[] }
    | { kind: 'problem_report'; problem: string; profile: Record<string, unknown> }
    | { kind: 'problem_factor'; problem: string; factor: string; value: unknown }
    | { kind: 'observation'; sign: string; observable: string; value: unknown }
    | { kind: 'test_result'; test: string; value?: number; aspects?: Record<string, number> }
    | { kind: 'alpha_override'; alpha: number | null }

export interface SessionCreated {
    session_id: string
    revision: number
    matrices: MatricesDoc
}

export interface SessionSummary {
    session_id: string
    revision: number
    alpha: number
    record: Record<string, unknown>
    matrices: MatricesDoc
    prominent: Record<string, string[]>
    audit: unknown[]
}

export interface FindingApplied {
    revision: number
    matrices: MatricesDoc
}

export interface PreviewResponse {
    alpha: number
    revision: number
    matrices: MatricesDoc
    prominent: Record<string, string[]>
}

export interface ErrorBody {
    code: string
    message: string
    path: string
    errors?: { path: string; message: string }[]
}
