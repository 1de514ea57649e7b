#ifndef VNF_JSON_IO_HPP
#define VNF_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "vnf/inverse_problem.hpp"

namespace vnf {

// All file formats are documented in docs/formats.md.  Keys keep insertion
// order so identical inputs produce byte-identical output.
using Json = nlohmann::ordered_json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

// Row-major nested arrays of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json hvector_to_json(const HVector& v);
HVector hvector_from_json(const Json& j);

Json superop_to_json(const SuperOperator& s);
SuperOperator superop_from_json(const Json& j);

Json antilinear_to_json(const AntilinearOp& a);
AntilinearOp antilinear_from_json(const Json& j);

Json mult_to_json(const Mult& m);
Mult mult_from_json(const Json& j);

Json spectral_data_to_json(const SpectralData& d);
SpectralData spectral_data_from_json(const Json& j);

Json delta_spectrum_to_json(const DeltaSpectrum& s);
DeltaSpectrum delta_spectrum_from_json(const Json& j);

Json tolerances_to_json(const Tolerances& t);

Json classification_to_json(const VectorClassification& c);
Json violations_to_json(const std::vector<Violation>& v);
Json modular_objects_to_json(const ModularObjects& mo);
Json identity_report_to_json(const ModularIdentityReport& r);
Json factorization_to_json(const DeltaFactorization& f);
Json certificate_to_json(const SolutionCertificate& c);
Json second_class_to_json(const SecondClassResult& r);
Json equivalence_to_json(const EquivalenceResult& r);
Json enumeration_to_json(const Enumeration& e);
Json variant_to_json(const Variant& v);

FactorType ftype_from_string(const std::string& s);

}  // namespace vnf

#endif  // VNF_JSON_IO_HPP
