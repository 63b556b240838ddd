#include "scn/report.hpp"

#include <cstdio>
#include <fstream>

#include "scn/errors.hpp"

namespace scn {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_metrics_csv(const std::filesystem::path& path, const std::vector<EpochMetrics>& trace) {
    std::ofstream out = open_out(path);
    out << "epoch,wce_loss,rr_loss,total_loss,train_accuracy,test_accuracy,"
           "test_mean_class_accuracy,alpha_mean_clean,alpha_mean_corrupted,"
           "relabel_events,relabel_precision,relabel_recall,learning_rate,delta1\n";
    for (const EpochMetrics& m : trace) {
        out << m.epoch << ',' << format_double(m.wce_loss) << ',' << format_double(m.rr_loss)
            << ',' << format_double(m.total_loss) << ',' << format_double(m.train_accuracy) << ','
            << format_optional(m.test_accuracy) << ',' << format_optional(m.test_mean_class_accuracy)
            << ',' << format_optional(m.alpha_mean_clean) << ','
            << format_optional(m.alpha_mean_corrupted) << ',' << m.relabel_events << ','
            << format_optional(m.relabel_precision) << ',' << format_double(m.relabel_recall)
            << ',' << format_double(m.learning_rate) << ',' << format_double(m.delta1) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void write_relabels_csv(const std::filesystem::path& path,
                        const std::vector<RelabelRecord>& events) {
    std::ofstream out = open_out(path);
    out << "epoch,sample_id,old_label,new_label,p_max,p_given\n";
    for (const RelabelRecord& ev : events) {
        out << ev.epoch << ',' << ev.sample_id << ',' << ev.old_label << ',' << ev.new_label
            << ',' << format_double(ev.p_max) << ',' << format_double(ev.p_given) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void write_ablation_csv(const std::filesystem::path& path, const std::vector<AblationRow>& rows) {
    std::ofstream out = open_out(path);
    out << "run,test_accuracy,test_mean_class_accuracy,final_train_accuracy\n";
    for (const AblationRow& row : rows) {
        out << row.label << ',' << format_double(row.test_accuracy) << ','
            << format_double(row.test_mean_class_accuracy) << ','
            << format_double(row.final_train_accuracy) << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace scn
